#include "citybrain/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "citybrain/city_iq.hpp"
#include "citybrain/errors.hpp"
#include "citybrain/log_io.hpp"
#include "citybrain/reflex.hpp"
#include "citybrain/report.hpp"
#include "citybrain/scenario.hpp"
#include "citybrain/sim_kernel.hpp"

namespace citybrain::cli {

namespace {

void print_errors(const std::vector<ScenarioError>& errors, std::ostream& err) {
    for (const auto& e : errors) {
        if (e.path.empty()) {
            err << "error: " << e.message << "\n";
        } else {
            err << "error: " << e.path << ": " << e.message << "\n";
        }
    }
}

struct RunSummary {
    std::size_t completed = 0;
    std::size_t suppressed = 0;
    std::size_t failed = 0;
    std::size_t sent = 0;
    std::size_t delivered = 0;
    std::size_t dropped = 0;
    std::string digest;
};

RunSummary summarize(const EventLog& log) {
    RunSummary s;
    for (const auto& trace : extract_traces(log)) {
        switch (trace.outcome.kind) {
            case ArcOutcomeKind::Completed: ++s.completed; break;
            case ArcOutcomeKind::Suppressed: ++s.suppressed; break;
            case ArcOutcomeKind::Failed: ++s.failed; break;
        }
    }
    s.sent = log.count(EventKind::MessageSent);
    s.delivered = log.count(EventKind::MessageDelivered);
    s.dropped = log.count(EventKind::MessageDropped);
    s.digest = log_digest(log);
    return s;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    auto result = load_scenario_file(path);
    if (!result.ok()) {
        print_errors(result.errors, err);
        return kExitInvalidInput;
    }
    const auto& config = *result.config;
    out << "valid: " << config.metadata.name << " (" << config.neurons.size() << " neurons, "
        << config.arcs.size() << " arcs, " << config.stimuli.size() << " stimuli)\n";
    return kExitOk;
}

int cmd_run(const std::string& path, std::uint64_t seed, const std::string& seeds_range,
            const std::string& log_out, std::ostream& out, std::ostream& err) {
    auto result = load_scenario_file(path);
    if (!result.ok()) {
        print_errors(result.errors, err);
        return kExitInvalidInput;
    }
    const auto& config = *result.config;

    std::vector<std::uint64_t> seeds{seed};
    if (!seeds_range.empty()) {
        const auto dots = seeds_range.find("..");
        std::uint64_t lo = 0;
        std::uint64_t hi = 0;
        try {
            if (dots == std::string::npos) throw std::invalid_argument("missing ..");
            lo = std::stoull(seeds_range.substr(0, dots));
            hi = std::stoull(seeds_range.substr(dots + 2));
        } catch (const std::exception&) {
            err << "error: --seeds wants a range like 0..9\n";
            return kExitInvalidInput;
        }
        if (hi < lo) {
            err << "error: --seeds range is empty\n";
            return kExitInvalidInput;
        }
        if (!log_out.empty()) {
            err << "error: --log-out works with a single seed only\n";
            return kExitInvalidInput;
        }
        seeds.clear();
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }

    try {
        if (seeds.size() == 1) {
            EventLog log = run_scenario(config, seeds.front());
            const RunSummary s = summarize(log);
            out << "scenario: " << config.metadata.name << "\n";
            out << "seed: " << seeds.front() << "\n";
            out << "records: " << log.size() << "\n";
            out << "traces: " << s.completed << " completed, " << s.suppressed << " suppressed, "
                << s.failed << " failed\n";
            out << "messages: " << s.sent << " sent, " << s.delivered << " delivered, "
                << s.dropped << " dropped\n";
            out << "log digest: " << s.digest << "\n";
            if (!log_out.empty()) {
                write_log(log, log_out);
                out << "log written: " << log_out << "\n";
            }
        } else {
            out << "scenario: " << config.metadata.name << "\n";
            for (std::uint64_t s : seeds) {
                const RunSummary summary = summarize(run_scenario(config, s));
                out << "seed " << s << ": digest " << summary.digest << "  traces "
                    << summary.completed << "c/" << summary.suppressed << "s/" << summary.failed
                    << "f  messages " << summary.sent << "/" << summary.delivered << "/"
                    << summary.dropped << "\n";
            }
        }
    } catch (const SimError& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}

int cmd_score(const std::string& path, std::uint64_t seed, const std::string& log_in,
              const std::string& format, const std::string& scale_params_path, std::ostream& out,
              std::ostream& err) {
    auto result = load_scenario_file(path);
    if (!result.ok()) {
        print_errors(result.errors, err);
        return kExitInvalidInput;
    }
    const auto& config = *result.config;

    ScaleParams params = config.scale;
    if (!scale_params_path.empty()) {
        std::ifstream in(scale_params_path, std::ios::binary);
        if (!in) {
            err << "error: cannot open '" << scale_params_path << "' for reading\n";
            return kExitInvalidInput;
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        auto overlay = parse_scale_params_overlay(buffer.str(), params);
        if (!overlay.ok()) {
            print_errors(overlay.errors, err);
            return kExitInvalidInput;
        }
        params = std::move(*overlay.params);
    }

    EventLog log;
    std::optional<std::uint64_t> report_seed;
    if (!log_in.empty()) {
        try {
            log = read_log(log_in);
        } catch (const SimError& e) {
            err << "error: " << e.what() << "\n";
            return kExitInvalidInput;
        }
    } else {
        report_seed = seed;
        try {
            log = run_scenario(config, seed);
        } catch (const SimError& e) {
            err << "error: " << e.what() << "\n";
            return kExitRuntimeError;
        }
    }

    try {
        const BigSnsGraph graph = build_graph(config);
        const CategoryRegistry registry = make_registry(params);
        const CityIqReport report =
            compute_city_iq(graph, log, config.census, params, registry, arc_categories(config),
                            SimTime(), config.metadata.horizon);
        ReportBundle bundle{report, log_digest(log), config.metadata.name, report_seed};
        out << (format == "structured" ? emit_report_structured(bundle)
                                       : emit_report_table(bundle));
    } catch (const SimError& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}

int cmd_list_arc_types(std::ostream& out) {
    out << "reflex arc types\n";
    for (const auto& type : arc_type_table()) {
        char line[160];
        std::snprintf(line, sizeof(line), "  %d  %s  %-7s -> %-7s  %s\n", type.ordinal,
                      type.label().c_str(), std::string(to_string(type.receptor)).c_str(),
                      std::string(to_string(type.effector)).c_str(),
                      std::string(arc_type_example(type.ordinal)).c_str());
        out << line;
    }
    CategoryRegistry registry;
    out << "arc categories (version " << registry.scale_version() << ")\n";
    for (const auto& name : registry.names()) {
        out << "  " << name << "\n";
    }
    return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"City Brain simulator and City IQ scorer"};
    app.name("citybrain");
    app.require_subcommand(1);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate->add_option("scenario", validate_path, "scenario JSON file")->required();

    std::string run_path;
    std::uint64_t run_seed = 0;
    std::string run_seeds;
    std::string run_log_out;
    auto* run = app.add_subcommand("run", "Run a scenario and summarize its event log");
    run->add_option("scenario", run_path, "scenario JSON file")->required();
    auto* run_seed_opt = run->add_option("--seed", run_seed, "root seed (default 0)");
    auto* run_seeds_opt = run->add_option("--seeds", run_seeds, "seed range A..B, one run each");
    run->add_option("--log-out", run_log_out, "write the event log to this file");
    run_seed_opt->excludes(run_seeds_opt);

    std::string score_path;
    std::uint64_t score_seed = 0;
    std::string score_log_in;
    std::string score_format = "table";
    std::string score_scale_params;
    auto* score = app.add_subcommand("score", "Compute the City IQ report for a scenario");
    score->add_option("scenario", score_path, "scenario JSON file")->required();
    auto* score_seed_opt = score->add_option("--seed", score_seed, "root seed (default 0)");
    auto* score_log_opt =
        score->add_option("--log-in", score_log_in, "score this event log instead of running");
    score->add_option("--format", score_format, "output form (default table)")
        ->check(CLI::IsMember({"table", "structured"}));
    score->add_option("--scale-params", score_scale_params,
                      "JSON file overriding the scenario's scale parameters");
    score_seed_opt->excludes(score_log_opt);

    auto* list = app.add_subcommand("list-arc-types",
                                    "Print the nine arc types and the standard categories");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const auto parsed = app.get_subcommands();
        out << (parsed.empty() ? app.help() : parsed.front()->help());
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }

    if (*validate) return cmd_validate(validate_path, out, err);
    if (*run) return cmd_run(run_path, run_seed, run_seeds, run_log_out, out, err);
    if (*score) {
        return cmd_score(score_path, score_seed, score_log_in, score_format, score_scale_params,
                         out, err);
    }
    if (*list) return cmd_list_arc_types(out);
    err << "error: no command given\n";
    return kExitInvalidInput;
}

}  // namespace citybrain::cli
