#include "citybrain/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "citybrain/errors.hpp"

namespace citybrain {

namespace {

using json = nlohmann::ordered_json;

// Collects located errors while walking the document; every accessor returns
// nullopt (and records why) instead of throwing, so one pass reports
// everything wrong at once.
struct Walk {
    std::vector<ScenarioError>& errors;

    void fail(std::string path, std::string message) {
        errors.push_back(ScenarioError{std::move(path), std::move(message)});
    }

    const json* object(const json& j, const std::string& path,
                       std::initializer_list<const char*> allowed,
                       std::initializer_list<const char*> required) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return nullptr;
        }
        for (const auto& [key, value] : j.items()) {
            if (std::find_if(allowed.begin(), allowed.end(),
                             [&key](const char* a) { return key == a; }) == allowed.end()) {
                fail(path + "." + key, "unknown field");
            }
        }
        bool complete = true;
        for (const char* key : required) {
            if (!j.contains(key)) {
                fail(path + "." + key, "required field is missing");
                complete = false;
            }
        }
        return complete ? &j : nullptr;
    }

    std::optional<std::string> string(const json& j, const std::string& path) {
        if (!j.is_string()) {
            fail(path, "expected a string");
            return std::nullopt;
        }
        return j.get<std::string>();
    }

    std::optional<double> number(const json& j, const std::string& path) {
        if (!j.is_number()) {
            fail(path, "expected a number");
            return std::nullopt;
        }
        return j.get<double>();
    }

    std::optional<std::uint64_t> count(const json& j, const std::string& path) {
        if (!j.is_number_unsigned()) {
            fail(path, "expected a nonnegative integer");
            return std::nullopt;
        }
        return j.get<std::uint64_t>();
    }

    std::optional<SimTime> time(const json& j, const std::string& path) {
        auto value = number(j, path);
        if (!value) return std::nullopt;
        if (!(*value >= 0.0)) {
            fail(path, "time must be nonnegative");
            return std::nullopt;
        }
        return SimTime::from_units(*value);
    }

    std::optional<DelayModel> delay(const json& j, const std::string& path) {
        if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
            fail(path, R"(expected a delay object with a "kind" field)");
            return std::nullopt;
        }
        const std::string kind = j["kind"].get<std::string>();
        std::optional<DelayModel> model;
        if (kind == "Constant") {
            if (!object(j, path, {"kind", "value"}, {"kind", "value"})) return std::nullopt;
            auto value = number(j["value"], path + ".value");
            if (!value) return std::nullopt;
            model = DelayModel::constant(*value);
        } else if (kind == "Uniform") {
            if (!object(j, path, {"kind", "lo", "hi"}, {"kind", "lo", "hi"})) return std::nullopt;
            auto lo = number(j["lo"], path + ".lo");
            auto hi = number(j["hi"], path + ".hi");
            if (!lo || !hi) return std::nullopt;
            model = DelayModel::uniform(*lo, *hi);
        } else if (kind == "Exponential") {
            if (!object(j, path, {"kind", "mean"}, {"kind", "mean"})) return std::nullopt;
            auto mean = number(j["mean"], path + ".mean");
            if (!mean) return std::nullopt;
            model = DelayModel::exponential(*mean);
        } else {
            fail(path + ".kind", "unknown delay kind '" + kind + "'");
            return std::nullopt;
        }
        if (!model->valid()) {
            fail(path, "delay parameters are invalid");
            return std::nullopt;
        }
        return model;
    }

    std::optional<OutageWindow> window(const json& j, const std::string& path) {
        if (!object(j, path, {"start", "end"}, {"start", "end"})) return std::nullopt;
        auto start = time(j["start"], path + ".start");
        auto end = time(j["end"], path + ".end");
        if (!start || !end) return std::nullopt;
        if (*end < *start) {
            fail(path, "window end precedes start");
            return std::nullopt;
        }
        return OutageWindow{*start, *end};
    }
};

CensusCategory default_census_category(NeuronKind kind) {
    switch (kind) {
        case NeuronKind::Human: return CensusCategory::Resident;
        case NeuronKind::Organization: return CensusCategory::BusinessOrg;
        case NeuronKind::Sensor:
        case NeuronKind::SmartDevice:
        case NeuronKind::SmartProgram: return CensusCategory::CityEquipment;
    }
    return CensusCategory::Resident;
}

void parse_metadata(Walk& w, const json& j, ScenarioMetadata& out) {
    const json* obj = w.object(j, "metadata", {"name", "time_unit", "horizon"},
                               {"name", "horizon"});
    if (obj == nullptr) return;
    if (auto name = w.string(j["name"], "metadata.name")) out.name = *name;
    if (j.contains("time_unit")) {
        if (auto unit = w.string(j["time_unit"], "metadata.time_unit")) out.time_unit = *unit;
    }
    if (auto horizon = w.time(j["horizon"], "metadata.horizon")) {
        if (*horizon <= SimTime()) {
            w.fail("metadata.horizon", "horizon must be positive");
        } else {
            out.horizon = *horizon;
        }
    }
}

void parse_neuron(Walk& w, const json& j, const std::string& path, NeuronDecl& out) {
    const json* obj = w.object(
        j, path, {"id", "kind", "census_category", "system_label", "display_name", "reaction"},
        {"id", "kind"});
    if (obj == nullptr) return;
    if (auto id = w.string(j["id"], path + ".id")) out.neuron.id = NeuronId{*id};
    if (auto kind = w.string(j["kind"], path + ".kind")) {
        if (auto parsed = neuron_kind_from(*kind)) {
            out.neuron.kind = *parsed;
            out.neuron.census_category = default_census_category(*parsed);
        } else {
            w.fail(path + ".kind", "unknown neuron kind '" + *kind + "'");
        }
    }
    if (j.contains("census_category")) {
        if (auto name = w.string(j["census_category"], path + ".census_category")) {
            if (auto parsed = census_category_from(*name)) {
                out.neuron.census_category = *parsed;
            } else {
                w.fail(path + ".census_category", "unknown census category '" + *name + "'");
            }
        }
    }
    if (j.contains("system_label")) {
        if (auto label = w.string(j["system_label"], path + ".system_label")) {
            out.neuron.system_label = *label;
        }
    }
    if (j.contains("display_name")) {
        if (auto name = w.string(j["display_name"], path + ".display_name")) {
            out.neuron.display_name = *name;
        }
    }
    if (j.contains("reaction")) {
        out.reaction = w.delay(j["reaction"], path + ".reaction");
    }
}

void parse_channel(Walk& w, const json& j, const std::string& path, Channel& out) {
    const json* obj = w.object(j, path, {"id", "delay", "failure_probability", "outages"},
                               {"id", "delay"});
    if (obj == nullptr) return;
    if (auto id = w.string(j["id"], path + ".id")) out.id = ChannelId{*id};
    if (auto delay = w.delay(j["delay"], path + ".delay")) out.delay = *delay;
    if (j.contains("failure_probability")) {
        if (auto p = w.number(j["failure_probability"], path + ".failure_probability")) {
            if (*p >= 0.0 && *p <= 1.0) {
                out.failure_probability = *p;
            } else {
                w.fail(path + ".failure_probability", "must lie in [0, 1]");
            }
        }
    }
    if (j.contains("outages")) {
        if (!j["outages"].is_array()) {
            w.fail(path + ".outages", "expected an array");
        } else {
            std::size_t i = 0;
            for (const auto& item : j["outages"]) {
                if (auto window =
                        w.window(item, path + ".outages[" + std::to_string(i) + "]")) {
                    out.outages.push_back(*window);
                }
                ++i;
            }
        }
    }
}

void parse_arc(Walk& w, const json& j, const std::string& path, ReflexArcSpec& out) {
    const json* obj = w.object(
        j, path, {"id", "category", "receptors", "afferent", "center", "efferent", "effectors"},
        {"id", "category", "receptors", "afferent", "efferent", "effectors"});
    if (obj == nullptr) return;
    if (auto id = w.string(j["id"], path + ".id")) out.arc_id = ArcId{*id};
    if (auto category = w.string(j["category"], path + ".category")) out.category = *category;

    auto id_list = [&w](const json& node, const std::string& list_path,
                        std::vector<NeuronId>& ids) {
        if (!node.is_array()) {
            w.fail(list_path, "expected an array of neuron ids");
            return;
        }
        std::size_t i = 0;
        for (const auto& item : node) {
            if (auto id = w.string(item, list_path + "[" + std::to_string(i) + "]")) {
                ids.push_back(NeuronId{*id});
            }
            ++i;
        }
    };
    id_list(j["receptors"], path + ".receptors", out.receptors);
    id_list(j["effectors"], path + ".effectors", out.effectors);
    if (auto id = w.string(j["afferent"], path + ".afferent")) out.afferent = ChannelId{*id};
    if (auto id = w.string(j["efferent"], path + ".efferent")) out.efferent = ChannelId{*id};

    if (j.contains("center")) {
        const std::string center_path = path + ".center";
        const json& c = j["center"];
        if (w.object(c, center_path, {"threshold", "processing_delay", "action"}, {"threshold"})) {
            if (auto threshold = w.number(c["threshold"], center_path + ".threshold")) {
                out.center.decision_threshold = *threshold;
            }
            if (c.contains("processing_delay")) {
                if (auto delay = w.delay(c["processing_delay"], center_path + ".processing_delay")) {
                    out.center.processing_delay = *delay;
                }
            }
            if (c.contains("action")) {
                if (auto name = w.string(c["action"], center_path + ".action")) {
                    if (auto action = center_action_from(*name)) {
                        out.center.action = *action;
                    } else {
                        w.fail(center_path + ".action", "unknown action '" + *name + "'");
                    }
                }
            }
        }
    }
}

void parse_stimulus(Walk& w, const json& j, const std::string& path, Stimulus& out) {
    const json* obj = w.object(j, path, {"id", "arc", "time", "intensity"},
                               {"id", "arc", "time", "intensity"});
    if (obj == nullptr) return;
    if (auto id = w.string(j["id"], path + ".id")) out.id = *id;
    if (auto arc = w.string(j["arc"], path + ".arc")) out.target_arc = ArcId{*arc};
    if (auto time = w.time(j["time"], path + ".time")) out.time = *time;
    if (auto intensity = w.number(j["intensity"], path + ".intensity")) {
        if (*intensity >= 0.0 && *intensity <= 1.0) {
            out.intensity = *intensity;
        } else {
            w.fail(path + ".intensity", "must lie in [0, 1]");
        }
    }
}

void parse_failure(Walk& w, const json& j, const std::string& path, FailureDirective& out) {
    const json* obj = w.object(j, path, {"target_kind", "target", "start", "end"},
                               {"target_kind", "start", "end"});
    if (obj == nullptr) return;
    if (auto kind = w.string(j["target_kind"], path + ".target_kind")) {
        if (auto parsed = failure_target_kind_from(*kind)) {
            out.kind = *parsed;
        } else {
            w.fail(path + ".target_kind", "unknown failure target kind '" + *kind + "'");
        }
    }
    if (j.contains("target")) {
        if (auto target = w.string(j["target"], path + ".target")) out.target = *target;
        if (out.kind == FailureTargetKind::Center) {
            w.fail(path + ".target", "a center failure takes no target");
        }
    } else if (out.kind != FailureTargetKind::Center) {
        w.fail(path + ".target", "required field is missing");
    }
    auto start = w.time(j["start"], path + ".start");
    auto end = w.time(j["end"], path + ".end");
    if (start && end) {
        if (*end < *start) {
            w.fail(path, "window end precedes start");
        } else {
            out.window = OutageWindow{*start, *end};
        }
    }
}

void parse_post(Walk& w, const json& j, const std::string& path, Post& out) {
    const json* obj = w.object(j, path, {"author", "time", "payload", "body"},
                               {"author", "time"});
    if (obj == nullptr) return;
    if (auto author = w.string(j["author"], path + ".author")) out.author = NeuronId{*author};
    if (auto time = w.time(j["time"], path + ".time")) out.timestamp = *time;
    if (j.contains("payload")) {
        if (auto name = w.string(j["payload"], path + ".payload")) {
            if (auto parsed = payload_kind_from(*name)) {
                out.payload_kind = *parsed;
            } else {
                w.fail(path + ".payload", "unknown payload kind '" + *name + "'");
            }
        }
    }
    if (j.contains("body")) {
        if (auto body = w.string(j["body"], path + ".body")) out.body = *body;
    }
}

void parse_census(Walk& w, const json& j, Census& out) {
    if (!j.is_object()) {
        w.fail("census", "expected an object");
        return;
    }
    for (const auto& [key, value] : j.items()) {
        const auto category = census_category_from(key);
        if (!category) {
            w.fail("census." + key, "unknown census category");
            continue;
        }
        if (auto n = w.count(value, "census." + key)) out[*category] = *n;
    }
}

void parse_scale(Walk& w, const json& j, const std::string& root, ScaleParams& out) {
    const json* obj = w.object(j, root,
                               {"default_reference_latency", "reference_latency",
                                "activeness_half_rate", "weight_network", "weight_arcs",
                                "nodata_policy", "extra_categories"},
                               {});
    if (obj == nullptr) return;
    if (j.contains("default_reference_latency")) {
        if (auto v = w.number(j["default_reference_latency"], root + ".default_reference_latency")) {
            out.default_reference_latency = *v;
        }
    }
    if (j.contains("reference_latency")) {
        const json& refs = j["reference_latency"];
        if (!refs.is_object()) {
            w.fail(root + ".reference_latency", "expected an object of category -> latency");
        } else {
            out.reference_latency.clear();  // the overlay replaces, not merges
            for (const auto& [key, value] : refs.items()) {
                if (auto v = w.number(value, root + ".reference_latency." + key)) {
                    out.reference_latency[key] = *v;
                }
            }
        }
    }
    if (j.contains("activeness_half_rate")) {
        if (auto v = w.number(j["activeness_half_rate"], root + ".activeness_half_rate")) {
            out.activeness_half_rate = *v;
        }
    }
    if (j.contains("weight_network")) {
        if (auto v = w.number(j["weight_network"], root + ".weight_network")) {
            out.weight_network = *v;
        }
    }
    if (j.contains("weight_arcs")) {
        if (auto v = w.number(j["weight_arcs"], root + ".weight_arcs")) out.weight_arcs = *v;
    }
    if (j.contains("nodata_policy")) {
        if (auto name = w.string(j["nodata_policy"], root + ".nodata_policy")) {
            if (auto policy = nodata_policy_from(*name)) {
                out.nodata_policy = *policy;
            } else {
                w.fail(root + ".nodata_policy", "unknown policy '" + *name + "'");
            }
        }
    }
    if (j.contains("extra_categories")) {
        const json& extras = j["extra_categories"];
        if (!extras.is_array()) {
            w.fail(root + ".extra_categories", "expected an array");
        } else {
            out.extra_categories.clear();
            std::size_t i = 0;
            for (const auto& item : extras) {
                if (auto name =
                        w.string(item, root + ".extra_categories[" + std::to_string(i) + "]")) {
                    out.extra_categories.push_back(*name);
                }
                ++i;
            }
        }
    }
    try {
        out.validate();
    } catch (const SimError& e) {
        w.fail(root, e.what());
    }
}

template <class Fn>
void parse_array(Walk& w, const json& root, const char* key, Fn&& per_item) {
    if (!root.contains(key)) return;
    const json& node = root[key];
    if (!node.is_array()) {
        w.fail(key, "expected an array");
        return;
    }
    std::size_t i = 0;
    for (const auto& item : node) {
        per_item(item, std::string(key) + "[" + std::to_string(i) + "]");
        ++i;
    }
}

}  // namespace

ParseResult parse_scenario(std::string_view text) {
    ParseResult result;
    Walk w{result.errors};

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        w.fail("", e.what());
        return result;
    }

    const json* root = w.object(doc, "",
                                {"schema_version", "metadata", "neurons", "edges", "channels",
                                 "arcs", "stimuli", "failures", "posts", "census", "scale"},
                                {"schema_version", "metadata"});
    if (root == nullptr) {
        // Strip the leading "." the path helper adds for top-level fields.
        for (auto& error : result.errors) {
            if (!error.path.empty() && error.path.front() == '.') error.path.erase(0, 1);
        }
        return result;
    }
    for (auto& error : result.errors) {
        if (!error.path.empty() && error.path.front() == '.') error.path.erase(0, 1);
    }

    ScenarioConfig config;
    if (!doc["schema_version"].is_number_integer()) {
        w.fail("schema_version", "expected an integer");
    } else {
        config.schema_version = doc["schema_version"].get<int>();
        if (config.schema_version != kScenarioSchemaVersion) {
            w.fail("schema_version",
                   "unsupported schema version " + std::to_string(config.schema_version) +
                       " (supported: " + std::to_string(kScenarioSchemaVersion) + ")");
        }
    }
    parse_metadata(w, doc["metadata"], config.metadata);

    parse_array(w, doc, "neurons", [&](const json& item, const std::string& path) {
        NeuronDecl decl;
        parse_neuron(w, item, path, decl);
        config.neurons.push_back(std::move(decl));
    });
    parse_array(w, doc, "edges", [&](const json& item, const std::string& path) {
        if (!w.object(item, path, {"from", "to"}, {"from", "to"})) return;
        FollowEdge edge;
        if (auto from = w.string(item["from"], path + ".from")) edge.from = NeuronId{*from};
        if (auto to = w.string(item["to"], path + ".to")) edge.to = NeuronId{*to};
        config.edges.push_back(std::move(edge));
    });
    parse_array(w, doc, "channels", [&](const json& item, const std::string& path) {
        Channel channel;
        parse_channel(w, item, path, channel);
        config.channels.push_back(std::move(channel));
    });
    parse_array(w, doc, "arcs", [&](const json& item, const std::string& path) {
        ReflexArcSpec arc;
        parse_arc(w, item, path, arc);
        config.arcs.push_back(std::move(arc));
    });
    parse_array(w, doc, "stimuli", [&](const json& item, const std::string& path) {
        Stimulus stimulus;
        parse_stimulus(w, item, path, stimulus);
        config.stimuli.push_back(std::move(stimulus));
    });
    parse_array(w, doc, "failures", [&](const json& item, const std::string& path) {
        FailureDirective directive;
        parse_failure(w, item, path, directive);
        config.failures.push_back(std::move(directive));
    });
    parse_array(w, doc, "posts", [&](const json& item, const std::string& path) {
        Post post;
        parse_post(w, item, path, post);
        config.posts.push_back(std::move(post));
    });
    if (doc.contains("census")) parse_census(w, doc["census"], config.census);
    if (doc.contains("scale")) parse_scale(w, doc["scale"], "scale", config.scale);

    if (!result.errors.empty()) return result;

    auto semantic = validate_scenario(config);
    if (!semantic.empty()) {
        result.errors = std::move(semantic);
        return result;
    }
    result.config = std::move(config);
    return result;
}

ParseResult load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ParseResult result;
        result.errors.push_back(ScenarioError{"", "cannot open '" + path + "' for reading"});
        return result;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        ParseResult result;
        result.errors.push_back(ScenarioError{"", "failed reading '" + path + "'"});
        return result;
    }
    return parse_scenario(buffer.str());
}

namespace {

json delay_to_json(const DelayModel& model) {
    switch (model.kind) {
        case DelayKind::Constant: return {{"kind", "Constant"}, {"value", model.a}};
        case DelayKind::Uniform: return {{"kind", "Uniform"}, {"lo", model.a}, {"hi", model.b}};
        case DelayKind::Exponential: return {{"kind", "Exponential"}, {"mean", model.a}};
    }
    return {};
}

}  // namespace

std::string serialize_scenario(const ScenarioConfig& config) {
    json doc;
    doc["schema_version"] = config.schema_version;
    doc["metadata"] = {{"name", config.metadata.name},
                       {"time_unit", config.metadata.time_unit},
                       {"horizon", config.metadata.horizon.units()}};
    doc["neurons"] = json::array();
    for (const auto& decl : config.neurons) {
        json item{{"id", decl.neuron.id.value},
                  {"kind", to_string(decl.neuron.kind)},
                  {"census_category", to_string(decl.neuron.census_category)},
                  {"system_label", decl.neuron.system_label},
                  {"display_name", decl.neuron.display_name}};
        if (decl.reaction) item["reaction"] = delay_to_json(*decl.reaction);
        doc["neurons"].push_back(std::move(item));
    }
    doc["edges"] = json::array();
    for (const auto& edge : config.edges) {
        doc["edges"].push_back({{"from", edge.from.value}, {"to", edge.to.value}});
    }
    doc["channels"] = json::array();
    for (const auto& channel : config.channels) {
        json item{{"id", channel.id.value},
                  {"delay", delay_to_json(channel.delay)},
                  {"failure_probability", channel.failure_probability}};
        json outages = json::array();
        for (const auto& window : channel.outages) {
            outages.push_back({{"start", window.start.units()}, {"end", window.end.units()}});
        }
        item["outages"] = std::move(outages);
        doc["channels"].push_back(std::move(item));
    }
    doc["arcs"] = json::array();
    for (const auto& arc : config.arcs) {
        json receptors = json::array();
        for (const auto& id : arc.receptors) receptors.push_back(id.value);
        json effectors = json::array();
        for (const auto& id : arc.effectors) effectors.push_back(id.value);
        doc["arcs"].push_back(
            {{"id", arc.arc_id.value},
             {"category", arc.category},
             {"receptors", std::move(receptors)},
             {"afferent", arc.afferent.value},
             {"center",
              {{"threshold", arc.center.decision_threshold},
               {"processing_delay", delay_to_json(arc.center.processing_delay)},
               {"action", to_string(arc.center.action)}}},
             {"efferent", arc.efferent.value},
             {"effectors", std::move(effectors)}});
    }
    doc["stimuli"] = json::array();
    for (const auto& stimulus : config.stimuli) {
        doc["stimuli"].push_back({{"id", stimulus.id},
                                  {"arc", stimulus.target_arc.value},
                                  {"time", stimulus.time.units()},
                                  {"intensity", stimulus.intensity}});
    }
    doc["failures"] = json::array();
    for (const auto& directive : config.failures) {
        json item{{"target_kind", to_string(directive.kind)}};
        if (directive.kind != FailureTargetKind::Center) item["target"] = directive.target;
        item["start"] = directive.window.start.units();
        item["end"] = directive.window.end.units();
        doc["failures"].push_back(std::move(item));
    }
    doc["posts"] = json::array();
    for (const auto& post : config.posts) {
        doc["posts"].push_back({{"author", post.author.value},
                                {"time", post.timestamp.units()},
                                {"payload", to_string(post.payload_kind)},
                                {"body", post.body}});
    }
    doc["census"] = json::object();
    for (auto category : {CensusCategory::Resident, CensusCategory::BusinessOrg,
                          CensusCategory::GovernmentAgency, CensusCategory::CityEquipment}) {
        doc["census"][std::string(to_string(category))] = config.census[category];
    }
    const auto& scale = config.scale;
    doc["scale"] = {{"default_reference_latency", scale.default_reference_latency},
                    {"reference_latency", json::object()},
                    {"activeness_half_rate", scale.activeness_half_rate},
                    {"weight_network", scale.weight_network},
                    {"weight_arcs", scale.weight_arcs},
                    {"nodata_policy", to_string(scale.nodata_policy)},
                    {"extra_categories", scale.extra_categories}};
    for (const auto& [category, latency] : scale.reference_latency) {
        doc["scale"]["reference_latency"][category] = latency;
    }
    return doc.dump(2) + "\n";
}

std::vector<ScenarioError> validate_scenario(const ScenarioConfig& config) {
    std::vector<ScenarioError> errors;
    auto fail = [&errors](std::string path, std::string message) {
        errors.push_back(ScenarioError{std::move(path), std::move(message)});
    };

    if (config.schema_version != kScenarioSchemaVersion) {
        fail("schema_version", "unsupported schema version");
    }
    if (config.metadata.horizon <= SimTime()) {
        fail("metadata.horizon", "horizon must be positive");
    }

    std::unordered_map<std::string, const Neuron*> neurons;
    for (std::size_t i = 0; i < config.neurons.size(); ++i) {
        const auto& decl = config.neurons[i];
        const std::string path = "neurons[" + std::to_string(i) + "]";
        if (decl.neuron.id.empty()) {
            fail(path + ".id", "neuron id must not be empty");
            continue;
        }
        if (!neurons.emplace(decl.neuron.id.value, &decl.neuron).second) {
            fail(path + ".id", "duplicate neuron id '" + decl.neuron.id.value + "'");
        }
        if (decl.reaction && decl.neuron.kind != NeuronKind::Human) {
            fail(path + ".reaction", "reaction profiles apply to Human neurons only");
        }
        if (decl.reaction && !decl.reaction->valid()) {
            fail(path + ".reaction", "delay parameters are invalid");
        }
    }

    for (std::size_t i = 0; i < config.edges.size(); ++i) {
        const auto& edge = config.edges[i];
        const std::string path = "edges[" + std::to_string(i) + "]";
        if (!neurons.count(edge.from.value)) {
            fail(path + ".from", "unknown neuron '" + edge.from.value + "'");
        }
        if (!neurons.count(edge.to.value)) {
            fail(path + ".to", "unknown neuron '" + edge.to.value + "'");
        }
        if (!edge.from.value.empty() && edge.from == edge.to) {
            fail(path, "self-loop on '" + edge.from.value + "'");
        }
    }

    std::unordered_set<std::string> channels;
    std::vector<ChannelId> channel_ids;
    for (std::size_t i = 0; i < config.channels.size(); ++i) {
        const auto& channel = config.channels[i];
        const std::string path = "channels[" + std::to_string(i) + "]";
        if (channel.id.empty()) {
            fail(path + ".id", "channel id must not be empty");
        } else if (!channels.insert(channel.id.value).second) {
            fail(path + ".id", "duplicate channel id '" + channel.id.value + "'");
        }
        channel_ids.push_back(channel.id);
        if (!channel.delay.valid()) fail(path + ".delay", "delay parameters are invalid");
        if (!(channel.failure_probability >= 0.0 && channel.failure_probability <= 1.0)) {
            fail(path + ".failure_probability", "must lie in [0, 1]");
        }
        for (std::size_t k = 0; k < channel.outages.size(); ++k) {
            const auto& window = channel.outages[k];
            const std::string outage_path = path + ".outages[" + std::to_string(k) + "]";
            if (window.end < window.start) fail(outage_path, "window end precedes start");
            if (k > 0 && window.start < channel.outages[k - 1].end) {
                fail(outage_path, "outage windows must be ordered and non-overlapping");
            }
        }
    }

    CategoryRegistry registry;
    bool registry_ok = true;
    for (std::size_t i = 0; i < config.scale.extra_categories.size(); ++i) {
        try {
            registry.extend(config.scale.extra_categories[i]);
        } catch (const SimError& e) {
            fail("scale.extra_categories[" + std::to_string(i) + "]", e.what());
            registry_ok = false;
        }
    }
    try {
        config.scale.validate();
    } catch (const SimError& e) {
        fail("scale", e.what());
    }

    // validate_arc wants the graph; build one from whatever registered cleanly.
    BigSnsGraph graph;
    for (const auto& [id, neuron] : neurons) graph.register_neuron(*neuron);

    std::unordered_set<std::string> arc_ids;
    for (std::size_t i = 0; i < config.arcs.size(); ++i) {
        const auto& arc = config.arcs[i];
        const std::string path = "arcs[" + std::to_string(i) + "]";
        if (arc.arc_id.empty()) {
            fail(path + ".id", "arc id must not be empty");
        } else if (!arc_ids.insert(arc.arc_id.value).second) {
            fail(path + ".id", "duplicate arc id '" + arc.arc_id.value + "'");
        }
        if (registry_ok && !registry.contains(arc.category)) {
            fail(path + ".category", "unknown category '" + arc.category + "'");
        }
        for (const auto& violation : validate_arc(arc, graph, channel_ids)) {
            std::string field;
            switch (violation.defect) {
                case ArcDefect::MissingAfferent:
                case ArcDefect::UnknownAfferentChannel: field = ".afferent"; break;
                case ArcDefect::MissingEfferent:
                case ArcDefect::UnknownEfferentChannel: field = ".efferent"; break;
                case ArcDefect::MissingReceptor:
                case ArcDefect::UnknownReceptor:
                case ArcDefect::IneligibleReceptorKind:
                case ArcDefect::MixedReceptorKinds: field = ".receptors"; break;
                case ArcDefect::MissingEffector:
                case ArcDefect::UnknownEffector:
                case ArcDefect::IneligibleEffectorKind:
                case ArcDefect::MixedEffectorKinds: field = ".effectors"; break;
                case ArcDefect::InvalidThreshold: field = ".center.threshold"; break;
                case ArcDefect::InvalidProcessingDelay: field = ".center.processing_delay"; break;
            }
            fail(path + field,
                 std::string(to_string(violation.defect)) + ": " + violation.message);
        }
    }

    std::unordered_set<std::string> stimulus_ids;
    for (std::size_t i = 0; i < config.stimuli.size(); ++i) {
        const auto& stimulus = config.stimuli[i];
        const std::string path = "stimuli[" + std::to_string(i) + "]";
        if (stimulus.id.empty()) {
            fail(path + ".id", "stimulus id must not be empty");
        } else if (!stimulus_ids.insert(stimulus.id).second) {
            fail(path + ".id", "duplicate stimulus id '" + stimulus.id + "'");
        }
        if (!arc_ids.count(stimulus.target_arc.value)) {
            fail(path + ".arc", "unknown arc '" + stimulus.target_arc.value + "'");
        }
        if (!(stimulus.intensity >= 0.0 && stimulus.intensity <= 1.0)) {
            fail(path + ".intensity", "must lie in [0, 1]");
        }
        if (stimulus.time < SimTime()) fail(path + ".time", "time must be nonnegative");
    }

    for (std::size_t i = 0; i < config.failures.size(); ++i) {
        const auto& directive = config.failures[i];
        const std::string path = "failures[" + std::to_string(i) + "]";
        switch (directive.kind) {
            case FailureTargetKind::Channel:
                if (!channels.count(directive.target)) {
                    fail(path + ".target", "unknown channel '" + directive.target + "'");
                }
                break;
            case FailureTargetKind::Neuron:
                if (!neurons.count(directive.target)) {
                    fail(path + ".target", "unknown neuron '" + directive.target + "'");
                }
                break;
            case FailureTargetKind::Center:
                if (!directive.target.empty()) {
                    fail(path + ".target", "a center failure takes no target");
                }
                break;
        }
        const auto& window = directive.window;
        if (window.start < SimTime() || window.end < window.start) {
            fail(path, "window must satisfy 0 <= start <= end");
        } else if (window.end > config.metadata.horizon) {
            fail(path, "window must end within the horizon");
        }
    }

    for (std::size_t i = 0; i < config.posts.size(); ++i) {
        const auto& post = config.posts[i];
        const std::string path = "posts[" + std::to_string(i) + "]";
        if (!neurons.count(post.author.value)) {
            fail(path + ".author", "unknown neuron '" + post.author.value + "'");
        }
        if (post.timestamp < SimTime()) fail(path + ".time", "time must be nonnegative");
    }

    return errors;
}

BigSnsGraph build_graph(const ScenarioConfig& config) {
    BigSnsGraph graph;
    for (const auto& decl : config.neurons) graph.register_neuron(decl.neuron);
    for (const auto& edge : config.edges) graph.connect(edge.from, edge.to);
    return graph;
}

ArcCategoryMap arc_categories(const ScenarioConfig& config) {
    ArcCategoryMap map;
    for (const auto& arc : config.arcs) map[arc.arc_id.value] = arc.category;
    return map;
}

const ReflexArcSpec* find_arc(const ScenarioConfig& config, const ArcId& id) {
    for (const auto& arc : config.arcs) {
        if (arc.arc_id == id) return &arc;
    }
    return nullptr;
}

ScaleParamsResult parse_scale_params_overlay(std::string_view text, ScaleParams base) {
    ScaleParamsResult result;
    Walk w{result.errors};
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        w.fail("", e.what());
        return result;
    }
    parse_scale(w, doc, "scale", base);
    if (result.errors.empty()) result.params = std::move(base);
    return result;
}

}  // namespace citybrain
