#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "citybrain/errors.hpp"
#include "citybrain/log_io.hpp"
#include "citybrain/report.hpp"
#include "citybrain/scenario.hpp"
#include "citybrain/sim_kernel.hpp"
#include "test_util.hpp"

using namespace citybrain;
using testutil::TestRng;

namespace {

const char* kMinimal = R"({
  "schema_version": 1,
  "metadata": {"name": "tiny", "horizon": 5.0}
})";

const char* kSmall = R"({
  "schema_version": 1,
  "metadata": {"name": "small", "horizon": 10.0},
  "neurons": [
    {"id": "eye", "kind": "Sensor"},
    {"id": "hand", "kind": "SmartDevice"}
  ],
  "edges": [{"from": "eye", "to": "hand"}],
  "channels": [
    {"id": "in", "delay": {"kind": "Constant", "value": 1.0}},
    {"id": "out", "delay": {"kind": "Constant", "value": 1.0}}
  ],
  "arcs": [
    {"id": "arc", "category": "Traffic", "receptors": ["eye"], "afferent": "in",
     "efferent": "out", "effectors": ["hand"]}
  ],
  "stimuli": [{"id": "s", "arc": "arc", "time": 1.0, "intensity": 0.9}],
  "census": {"CityEquipment": 2}
})";

bool has_error_at(const ParseResult& result, const std::string& path) {
    return std::any_of(result.errors.begin(), result.errors.end(),
                       [&path](const ScenarioError& e) { return e.path == path; });
}

bool has_error_at(const std::vector<ScenarioError>& errors, const std::string& path) {
    return std::any_of(errors.begin(), errors.end(),
                       [&path](const ScenarioError& e) { return e.path == path; });
}

const char* kFixtures[] = {"fire-alarm.json", "datacenter.json", "nine-arcs.json",
                           "perfect-city.json", "truncated-horizon.json"};

}  // namespace

TEST_CASE("scenario parsing") {
    SUBCASE("minimal document") {
        auto result = parse_scenario(kMinimal);
        REQUIRE(result.ok());
        CHECK(result.config->metadata.name == "tiny");
        CHECK(result.config->metadata.time_unit == "units");
        CHECK(result.config->metadata.horizon == SimTime::from_units(5.0));
        CHECK(result.config->neurons.empty());
    }

    SUBCASE("small runnable document") {
        auto result = parse_scenario(kSmall);
        REQUIRE(result.ok());
        const auto& config = *result.config;
        CHECK(config.neurons.size() == 2);
        CHECK(config.neurons[0].neuron.census_category == CensusCategory::CityEquipment);
        CHECK(config.arcs.size() == 1);
        // Omitted center falls back to the default policy.
        CHECK(config.arcs[0].center.decision_threshold == doctest::Approx(0.5));
        CHECK(config.arcs[0].center.processing_delay == DelayModel::constant(0.0));
        CHECK(config.census[CensusCategory::CityEquipment] == 2);
        // And the whole thing actually runs.
        EventLog log = run_scenario(config, 7);
        CHECK(log.count(EventKind::StageTransition) == 5);
    }

    SUBCASE("json syntax error is a single located failure") {
        auto result = parse_scenario("{ not json");
        CHECK_FALSE(result.ok());
        CHECK(result.errors.size() == 1);
    }

    SUBCASE("missing schema version") {
        auto result = parse_scenario(R"({"metadata": {"name": "x", "horizon": 1.0}})");
        CHECK_FALSE(result.ok());
        CHECK(has_error_at(result, "schema_version"));
    }

    SUBCASE("unsupported schema version") {
        auto result = parse_scenario(
            R"({"schema_version": 2, "metadata": {"name": "x", "horizon": 1.0}})");
        CHECK_FALSE(result.ok());
        CHECK(has_error_at(result, "schema_version"));
    }

    SUBCASE("unknown fields are rejected, not ignored") {
        auto result = parse_scenario(
            R"({"schema_version": 1, "metadata": {"name": "x", "horizon": 1.0}, "extras": []})");
        CHECK_FALSE(result.ok());
        CHECK(has_error_at(result, "extras"));

        result = parse_scenario(R"({
  "schema_version": 1,
  "metadata": {"name": "x", "horizon": 1.0},
  "neurons": [{"id": "a", "kind": "Sensor", "color": "red"}]
})");
        CHECK_FALSE(result.ok());
        CHECK(has_error_at(result, "neurons[0].color"));
    }

    SUBCASE("dangling arc references carry their location") {
        auto result = parse_scenario(R"({
  "schema_version": 1,
  "metadata": {"name": "x", "horizon": 1.0},
  "neurons": [
    {"id": "eye", "kind": "Sensor"},
    {"id": "hand", "kind": "SmartDevice"}
  ],
  "channels": [{"id": "out", "delay": {"kind": "Constant", "value": 1.0}}],
  "arcs": [{"id": "arc", "category": "Traffic", "receptors": ["eye"], "afferent": "ghost-wire",
            "efferent": "out", "effectors": ["hand"]}]
})");
        CHECK_FALSE(result.ok());
        CHECK(has_error_at(result, "arcs[0].afferent"));
    }

    SUBCASE("bad delay models are rejected where they appear") {
        auto result = parse_scenario(R"({
  "schema_version": 1,
  "metadata": {"name": "x", "horizon": 1.0},
  "channels": [{"id": "w", "delay": {"kind": "Uniform", "lo": 5.0, "hi": 1.0}}]
})");
        CHECK_FALSE(result.ok());
        CHECK(has_error_at(result, "channels[0].delay"));

        result = parse_scenario(R"({
  "schema_version": 1,
  "metadata": {"name": "x", "horizon": 1.0},
  "channels": [{"id": "w", "delay": {"kind": "Warp", "value": 1.0}}]
})");
        CHECK_FALSE(result.ok());
        CHECK(has_error_at(result, "channels[0].delay.kind"));
    }

    SUBCASE("census categories default by neuron kind") {
        auto result = parse_scenario(R"({
  "schema_version": 1,
  "metadata": {"name": "x", "horizon": 1.0},
  "neurons": [
    {"id": "p", "kind": "Human"},
    {"id": "o", "kind": "Organization"},
    {"id": "g", "kind": "Organization", "census_category": "GovernmentAgency"},
    {"id": "d", "kind": "SmartDevice"},
    {"id": "s", "kind": "Sensor"},
    {"id": "j", "kind": "SmartProgram"}
  ]
})");
        REQUIRE(result.ok());
        const auto& n = result.config->neurons;
        CHECK(n[0].neuron.census_category == CensusCategory::Resident);
        CHECK(n[1].neuron.census_category == CensusCategory::BusinessOrg);
        CHECK(n[2].neuron.census_category == CensusCategory::GovernmentAgency);
        CHECK(n[3].neuron.census_category == CensusCategory::CityEquipment);
        CHECK(n[4].neuron.census_category == CensusCategory::CityEquipment);
        CHECK(n[5].neuron.census_category == CensusCategory::CityEquipment);
    }

    SUBCASE("all located errors are collected in one pass") {
        auto result = parse_scenario(R"({
  "schema_version": 1,
  "metadata": {"name": "x", "horizon": 1.0},
  "neurons": [{"id": "a", "kind": "Martian"}],
  "stimuli": [{"id": "s", "arc": "none", "time": -1.0, "intensity": 7.0}]
})");
        CHECK_FALSE(result.ok());
        CHECK(result.errors.size() >= 3);
        CHECK(has_error_at(result, "neurons[0].kind"));
        CHECK(has_error_at(result, "stimuli[0].time"));
        CHECK(has_error_at(result, "stimuli[0].intensity"));
    }
}

TEST_CASE("semantic validation") {
    auto base = parse_scenario(kSmall);
    REQUIRE(base.ok());

    SUBCASE("duplicate ids") {
        auto config = *base.config;
        config.neurons.push_back(config.neurons[0]);
        CHECK(has_error_at(validate_scenario(config), "neurons[2].id"));

        config = *base.config;
        config.channels.push_back(config.channels[0]);
        CHECK(has_error_at(validate_scenario(config), "channels[2].id"));

        config = *base.config;
        config.stimuli.push_back(config.stimuli[0]);
        CHECK(has_error_at(validate_scenario(config), "stimuli[1].id"));
    }

    SUBCASE("edges must resolve and not self-loop") {
        auto config = *base.config;
        config.edges.push_back(FollowEdge{NeuronId{"eye"}, NeuronId{"ghost"}});
        CHECK(has_error_at(validate_scenario(config), "edges[1].to"));
        config.edges.back() = FollowEdge{NeuronId{"eye"}, NeuronId{"eye"}};
        CHECK(has_error_at(validate_scenario(config), "edges[1]"));
    }

    SUBCASE("reaction profiles are for humans") {
        auto config = *base.config;
        config.neurons[0].reaction = DelayModel::constant(1.0);  // a Sensor
        CHECK(has_error_at(validate_scenario(config), "neurons[0].reaction"));
    }

    SUBCASE("channel outages must be ordered and disjoint") {
        auto config = *base.config;
        config.channels[0].outages = {
            OutageWindow{SimTime::from_units(1.0), SimTime::from_units(3.0)},
            OutageWindow{SimTime::from_units(2.0), SimTime::from_units(4.0)}};
        CHECK(has_error_at(validate_scenario(config), "channels[0].outages[1]"));
    }

    SUBCASE("failure windows stay within the horizon") {
        auto config = *base.config;
        FailureDirective directive;
        directive.kind = FailureTargetKind::Channel;
        directive.target = "in";
        directive.window = OutageWindow{SimTime::from_units(5.0), SimTime::from_units(11.0)};
        config.failures = {directive};
        CHECK(has_error_at(validate_scenario(config), "failures[0]"));
    }

    SUBCASE("unknown arc category") {
        auto config = *base.config;
        config.arcs[0].category = "Clouds";
        CHECK(has_error_at(validate_scenario(config), "arcs[0].category"));
        // ... unless the scale registers it as an extension.
        config.scale.extra_categories.push_back("Clouds");
        CHECK(validate_scenario(config).empty());
    }

    SUBCASE("scale parameter errors are located") {
        auto config = *base.config;
        config.scale.weight_network = 0.9;  // no longer sums to 1
        CHECK(has_error_at(validate_scenario(config), "scale"));

        config = *base.config;
        config.scale.extra_categories = {"Security"};  // collides with a standard member
        CHECK(has_error_at(validate_scenario(config), "scale.extra_categories[0]"));
    }

    SUBCASE("posts must come from registered neurons") {
        auto config = *base.config;
        Post post;
        post.author = NeuronId{"ghost"};
        post.timestamp = SimTime::from_units(1.0);
        config.posts = {post};
        CHECK(has_error_at(validate_scenario(config), "posts[0].author"));
    }
}

TEST_CASE("scenario round-trips") {
    for (const char* name : kFixtures) {
        CAPTURE(name);
        auto first = load_scenario_file(testutil::scenario_path(name));
        REQUIRE_MESSAGE(first.ok(), name);

        std::string text = serialize_scenario(*first.config);
        auto second = parse_scenario(text);
        REQUIRE_MESSAGE(second.ok(), name);
        CHECK(*second.config == *first.config);
        // Serialization reaches a fixpoint after one pass.
        CHECK(serialize_scenario(*second.config) == text);
    }

    SUBCASE("missing file reports cleanly") {
        auto result = load_scenario_file("/no/such/file.json");
        CHECK_FALSE(result.ok());
        REQUIRE(result.errors.size() == 1);
    }
}

TEST_CASE("helpers over configs") {
    auto result = load_scenario_file(testutil::scenario_path("fire-alarm.json"));
    REQUIRE(result.ok());
    const auto& config = *result.config;

    BigSnsGraph graph = build_graph(config);
    CHECK(graph.neuron_count() == config.neurons.size());
    CHECK(graph.edge_count() == config.edges.size());

    auto categories = arc_categories(config);
    CHECK(categories.size() == config.arcs.size());
    CHECK(categories.at("sensors-to-robot") == "Security");

    CHECK(find_arc(config, ArcId{"watchman-to-robot"}) != nullptr);
    CHECK(find_arc(config, ArcId{"nope"}) == nullptr);
}

TEST_CASE("log serialization") {
    SUBCASE("escapes the delimiter alphabet") {
        EventLog log;
        log.append(SimTime::from_units(0.5), EventKind::MessageSent,
                   {"wire,with,commas", "tab\there"},
                   {{"body", "line\nbreak=equals%percent"}, {"k2", "\rcarriage"}});
        log.append(SimTime::from_units(1.0), EventKind::MessageDelivered, {"ünïcode"},
                   {{"payload", "Status"}});
        std::string text = serialize_log(log);
        // One line per record, and no raw delimiter leaks inside fields.
        CHECK(std::count(text.begin(), text.end(), '\n') == 2);
        EventLog parsed = parse_log(text);
        CHECK(parsed == log);
    }

    SUBCASE("round-trips a real run byte for byte") {
        auto result = load_scenario_file(testutil::scenario_path("datacenter.json"));
        REQUIRE(result.ok());
        EventLog log = run_scenario(*result.config, 3);
        std::string text = serialize_log(log);
        EventLog parsed = parse_log(text);
        CHECK(parsed == log);
        CHECK(serialize_log(parsed) == text);
        CHECK(log_digest(parsed) == log_digest(log));
    }

    SUBCASE("empty log is an empty string") {
        CHECK(serialize_log(EventLog{}).empty());
        CHECK(parse_log("").empty());
    }

    SUBCASE("truncation is detected") {
        EventLog log;
        log.append(SimTime::from_units(1.0), EventKind::MessageSent, {"w"}, {});
        log.append(SimTime::from_units(2.0), EventKind::MessageDelivered, {"w"}, {});
        std::string text = serialize_log(log);
        CHECK_THROWS_AS(parse_log(text.substr(0, text.size() - 1)), SimError);
        CHECK_THROWS_AS(parse_log(text.substr(0, text.size() / 2)), SimError);
    }

    SUBCASE("corrupt fields are rejected") {
        // Wrong field count.
        CHECK_THROWS_AS(parse_log("1\t0.000000000\tMessageSent\n"), SimError);
        // Unknown kind.
        CHECK_THROWS_AS(parse_log("1\t0.000000000\tTeleport\tw\t\n"), SimError);
        // Sequence numbers must strictly increase.
        CHECK_THROWS_AS(
            parse_log("1\t0.000000000\tMessageSent\tw\t\n1\t1.000000000\tMessageSent\tw\t\n"),
            SimError);
        // Non-monotonic time.
        CHECK_THROWS_AS(
            parse_log("1\t5.000000000\tMessageSent\tw\t\n2\t4.000000000\tMessageSent\tw\t\n"),
            SimError);
        // Mangled escape.
        CHECK_THROWS_AS(parse_log("1\t0.000000000\tMessageSent\tw%GG\t\n"), SimError);
        // Negative or non-numeric time.
        CHECK_THROWS_AS(parse_log("1\tnoon\tMessageSent\tw\t\n"), SimError);
    }

    SUBCASE("file round-trip") {
        auto result = load_scenario_file(testutil::scenario_path("nine-arcs.json"));
        REQUIRE(result.ok());
        EventLog log = run_scenario(*result.config, 11);
        const std::string path = "citybrain_log_io_test.tmp";
        write_log(log, path);
        EventLog loaded = read_log(path);
        std::remove(path.c_str());
        CHECK(loaded == log);
        CHECK_THROWS_AS(read_log("/no/such/dir/log.txt"), SimError);
    }
}

TEST_CASE("time text form") {
    SUBCASE("fixed width with nine decimals") {
        CHECK(SimTime::from_units(12.5).text() == "12.500000000");
        CHECK(SimTime().text() == "0.000000000");
        CHECK(SimTime::from_nanos(1).text() == "0.000000001");
    }

    SUBCASE("parse accepts exactly the emitted form") {
        CHECK(SimTime::parse("12.500000000") == SimTime::from_units(12.5));
        CHECK_FALSE(SimTime::parse("12.5").has_value());
        CHECK_FALSE(SimTime::parse("12").has_value());
        CHECK_FALSE(SimTime::parse("").has_value());
        CHECK_FALSE(SimTime::parse("a.bcdefghij").has_value());
        CHECK_FALSE(SimTime::parse("-1.000000000").has_value());
        CHECK_FALSE(SimTime::parse("1.0000000001").has_value());
    }

    SUBCASE("random values survive the text round-trip") {
        TestRng rng(0x5eed0007);
        for (int i = 0; i < 2000; ++i) {
            auto t = SimTime::from_nanos(static_cast<std::int64_t>(rng.next() >> 20));
            auto parsed = SimTime::parse(t.text());
            REQUIRE(parsed.has_value());
            CHECK(*parsed == t);
        }
    }
}

TEST_CASE("scale parameter overlays") {
    ScaleParams base;
    base.default_reference_latency = 4.0;
    base.reference_latency["Traffic"] = 9.0;
    base.nodata_policy = NoDataPolicy::ScoreZero;

    SUBCASE("present fields replace, absent fields survive") {
        auto result = parse_scale_params_overlay(
            R"({"nodata_policy": "Exclude", "reference_latency": {"Energy": 2.0}})", base);
        REQUIRE(result.ok());
        CHECK(result.params->nodata_policy == NoDataPolicy::Exclude);
        CHECK(result.params->default_reference_latency == doctest::Approx(4.0));
        // The map is replaced wholesale, not merged.
        CHECK(result.params->reference_latency.count("Traffic") == 0);
        CHECK(result.params->reference_latency.at("Energy") == doctest::Approx(2.0));
    }

    SUBCASE("weights must still balance after the overlay") {
        auto result = parse_scale_params_overlay(R"({"weight_network": 0.9})", base);
        CHECK_FALSE(result.ok());
    }

    SUBCASE("unknown fields rejected") {
        auto result = parse_scale_params_overlay(R"({"speed_bonus": 1.0})", base);
        CHECK_FALSE(result.ok());
    }
}

TEST_CASE("report round-trips") {
    auto result = load_scenario_file(testutil::scenario_path("perfect-city.json"));
    REQUIRE(result.ok());
    const auto& config = *result.config;
    EventLog log = run_scenario(config, 0);

    BigSnsGraph graph = build_graph(config);
    CategoryRegistry registry = make_registry(config.scale);
    ReportBundle bundle;
    bundle.report = compute_city_iq(graph, log, config.census, config.scale, registry,
                                    arc_categories(config), SimTime(), config.metadata.horizon);
    bundle.run_digest = log_digest(log);
    bundle.scenario_name = config.metadata.name;
    bundle.seed = 0;

    SUBCASE("structured form") {
        std::string text = emit_report_structured(bundle);
        ReportBundle parsed = parse_report_structured(text);
        CHECK(parsed == bundle);
        CHECK(emit_report_structured(parsed) == text);
    }

    SUBCASE("structured form without a seed") {
        bundle.seed.reset();
        ReportBundle parsed = parse_report_structured(emit_report_structured(bundle));
        CHECK_FALSE(parsed.seed.has_value());
        CHECK(parsed == bundle);
    }

    SUBCASE("corrupt reports are refused") {
        CHECK_THROWS_AS(parse_report_structured("not json"), SimError);
        CHECK_THROWS_AS(parse_report_structured("{}"), SimError);
        CHECK_THROWS_AS(parse_report_structured(R"({"scenario": "x"})"), SimError);
    }

    SUBCASE("table form carries the headline number") {
        std::string table = emit_report_table(bundle);
        CHECK(table.find("City IQ Test Scale (version 2017)") != std::string::npos);
        CHECK(table.find("City IQ: 100.00") != std::string::npos);
        CHECK(table.find("robustness") != std::string::npos);
        CHECK(table.find("EnvironmentalProtection") != std::string::npos);
    }
}
