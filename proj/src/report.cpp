#include "citybrain/report.hpp"

#include <cstdio>

#include <json.hpp>

#include "citybrain/errors.hpp"

namespace citybrain {

namespace {

using json = nlohmann::ordered_json;

std::string fixed4(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", value);
    return buf;
}

std::string pad(std::string text, std::size_t width) {
    if (text.size() < width) text.append(width - text.size(), ' ');
    return text;
}

std::string index_cell(const IndexScore& score) {
    return score.has_data() ? fixed4(score.value) : std::string("no data");
}

// Row score under the bundle's policy; nullopt means the row is unmeasured
// and excluded from the level-1 mean.
std::optional<double> row_score(const CategoryScores& scores, NoDataPolicy policy) {
    const double speed = scores.response_speed.value;
    const double robust = scores.robustness.value;
    if (policy == NoDataPolicy::ScoreZero) return (speed + robust) / 2.0;
    const bool s = scores.response_speed.has_data();
    const bool r = scores.robustness.has_data();
    if (s && r) return (speed + robust) / 2.0;
    if (s) return speed;
    if (r) return robust;
    return std::nullopt;
}

json index_to_json(const IndexScore& score) {
    return {{"value", score.value}, {"samples", score.sample_count}};
}

IndexScore index_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("value") || !j.contains("samples") ||
        !j["value"].is_number() || !j["samples"].is_number_unsigned()) {
        throw SimError(Errc::CorruptRecord, where + ": expected {value, samples}");
    }
    return IndexScore::of(j["value"].get<double>(), j["samples"].get<std::uint64_t>());
}

const json& need(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw SimError(Errc::CorruptRecord, std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

double need_number(const json& j, const char* key) {
    const json& field = need(j, key);
    if (!field.is_number()) {
        throw SimError(Errc::CorruptRecord, std::string("field '") + key + "' must be a number");
    }
    return field.get<double>();
}

std::string need_string(const json& j, const char* key) {
    const json& field = need(j, key);
    if (!field.is_string()) {
        throw SimError(Errc::CorruptRecord, std::string("field '") + key + "' must be a string");
    }
    return field.get<std::string>();
}

}  // namespace

std::string emit_report_table(const ReportBundle& bundle) {
    const CityIqReport& report = bundle.report;
    std::string out;
    out += "City IQ Test Scale (version " + report.scale_version + ")\n";
    out += "scenario: " + bundle.scenario_name + "\n";
    if (bundle.seed) out += "seed: " + std::to_string(*bundle.seed) + "\n";
    out += "log: " + bundle.run_digest + "\n";
    out += "no-data policy: " + std::string(to_string(report.nodata_policy)) + "\n";
    out += "\n";

    char line[160];
    std::snprintf(line, sizeof(line), "network indexes%*sscore %s  weight %.2f\n", 21, "",
                  fixed4(report.network_score).c_str(), report.weight_network);
    out += line;
    const std::pair<const char*, const IndexScore*> network[] = {
        {"robustness", &report.network_robustness},
        {"uniformity", &report.network_uniformity},
        {"coverage", &report.network_coverage},
        {"activeness", &report.network_activeness},
    };
    for (const auto& [name, score] : network) {
        out += "  " + pad(name, 14) + pad(index_cell(*score), 10);
        if (score->has_data()) {
            out += "samples " + std::to_string(score->sample_count);
        }
        out += "\n";
    }
    out += "\n";

    std::snprintf(line, sizeof(line), "reflex arc indexes%*sscore %s  weight %.2f\n", 18, "",
                  fixed4(report.arc_score).c_str(), report.weight_arcs);
    out += line;
    out += "  " + pad("category", 26) + pad("speed", 10) + pad("robustness", 12) + "score\n";
    for (const auto& [category, scores] : report.arc_indexes) {
        out += "  " + pad(category, 26) + pad(index_cell(scores.response_speed), 10) +
               pad(index_cell(scores.robustness), 12);
        const auto score = row_score(scores, report.nodata_policy);
        out += score ? fixed4(*score) : std::string("excluded");
        out += "\n";
    }
    out += "\n";

    std::snprintf(line, sizeof(line), "City IQ: %.2f\n", report.city_iq);
    out += line;
    return out;
}

std::string emit_report_structured(const ReportBundle& bundle) {
    const CityIqReport& report = bundle.report;
    json doc;
    doc["scenario"] = bundle.scenario_name;
    if (bundle.seed) doc["seed"] = *bundle.seed;
    doc["run_digest"] = bundle.run_digest;
    doc["scale_version"] = report.scale_version;
    doc["nodata_policy"] = to_string(report.nodata_policy);
    doc["weight_network"] = report.weight_network;
    doc["weight_arcs"] = report.weight_arcs;
    doc["network_indexes"] = {{"robustness", index_to_json(report.network_robustness)},
                              {"uniformity", index_to_json(report.network_uniformity)},
                              {"coverage", index_to_json(report.network_coverage)},
                              {"activeness", index_to_json(report.network_activeness)}};
    doc["arc_indexes"] = json::array();
    for (const auto& [category, scores] : report.arc_indexes) {
        doc["arc_indexes"].push_back({{"category", category},
                                      {"response_speed", index_to_json(scores.response_speed)},
                                      {"robustness", index_to_json(scores.robustness)}});
    }
    doc["network_score"] = report.network_score;
    doc["arc_score"] = report.arc_score;
    doc["city_iq"] = report.city_iq;
    return doc.dump(2) + "\n";
}

ReportBundle parse_report_structured(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SimError(Errc::CorruptRecord, e.what());
    }

    ReportBundle bundle;
    bundle.scenario_name = need_string(doc, "scenario");
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) {
            throw SimError(Errc::CorruptRecord, "field 'seed' must be a nonnegative integer");
        }
        bundle.seed = doc["seed"].get<std::uint64_t>();
    }
    bundle.run_digest = need_string(doc, "run_digest");

    CityIqReport& report = bundle.report;
    report.scale_version = need_string(doc, "scale_version");
    const std::string policy_name = need_string(doc, "nodata_policy");
    const auto policy = nodata_policy_from(policy_name);
    if (!policy) {
        throw SimError(Errc::CorruptRecord, "unknown no-data policy '" + policy_name + "'");
    }
    report.nodata_policy = *policy;
    report.weight_network = need_number(doc, "weight_network");
    report.weight_arcs = need_number(doc, "weight_arcs");

    const json& network = need(doc, "network_indexes");
    report.network_robustness = index_from_json(need(network, "robustness"), "robustness");
    report.network_uniformity = index_from_json(need(network, "uniformity"), "uniformity");
    report.network_coverage = index_from_json(need(network, "coverage"), "coverage");
    report.network_activeness = index_from_json(need(network, "activeness"), "activeness");

    const json& arcs = need(doc, "arc_indexes");
    if (!arcs.is_array()) {
        throw SimError(Errc::CorruptRecord, "field 'arc_indexes' must be an array");
    }
    for (const auto& item : arcs) {
        CategoryScores scores;
        const std::string category = need_string(item, "category");
        scores.response_speed =
            index_from_json(need(item, "response_speed"), category + ".response_speed");
        scores.robustness = index_from_json(need(item, "robustness"), category + ".robustness");
        report.arc_indexes.emplace_back(category, scores);
    }

    report.network_score = need_number(doc, "network_score");
    report.arc_score = need_number(doc, "arc_score");
    report.city_iq = need_number(doc, "city_iq");
    return bundle;
}

}  // namespace citybrain
