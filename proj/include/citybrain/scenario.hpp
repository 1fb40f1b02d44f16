#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citybrain/city_iq.hpp"
#include "citybrain/reflex.hpp"
#include "citybrain/sim_kernel.hpp"
#include "citybrain/sns_graph.hpp"

namespace citybrain {

inline constexpr int kScenarioSchemaVersion = 1;

struct ScenarioMetadata {
    std::string name;
    std::string time_unit = "units";
    SimTime horizon;

    friend bool operator==(const ScenarioMetadata&, const ScenarioMetadata&) = default;
};

struct NeuronDecl {
    Neuron neuron;
    std::optional<DelayModel> reaction;  // humans only

    friend bool operator==(const NeuronDecl&, const NeuronDecl&) = default;
};

// Declarative description of a city: participants, links, transports, arcs,
// stimuli, failures, scheduled posts, census and scoring parameters.
struct ScenarioConfig {
    int schema_version = kScenarioSchemaVersion;
    ScenarioMetadata metadata;
    std::vector<NeuronDecl> neurons;
    std::vector<FollowEdge> edges;
    std::vector<Channel> channels;
    std::vector<ReflexArcSpec> arcs;
    std::vector<Stimulus> stimuli;
    std::vector<FailureDirective> failures;
    std::vector<Post> posts;
    Census census;
    ScaleParams scale;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct ScenarioError {
    std::string path;  // location in the input, e.g. "arcs[0].afferent"
    std::string message;

    friend bool operator==(const ScenarioError&, const ScenarioError&) = default;
};

struct ParseResult {
    std::optional<ScenarioConfig> config;
    std::vector<ScenarioError> errors;

    bool ok() const { return config.has_value() && errors.empty(); }
};

// Strict parse: JSON syntax, required schema_version, unknown fields rejected,
// every cross-reference resolved. All located errors are collected.
ParseResult parse_scenario(std::string_view text);
ParseResult load_scenario_file(const std::string& path);

std::string serialize_scenario(const ScenarioConfig& config);

// Semantic validation of an already-built config (also used on programmatic
// configs before a run).
std::vector<ScenarioError> validate_scenario(const ScenarioConfig& config);

BigSnsGraph build_graph(const ScenarioConfig& config);
ArcCategoryMap arc_categories(const ScenarioConfig& config);
const ReflexArcSpec* find_arc(const ScenarioConfig& config, const ArcId& id);

struct ScaleParamsResult {
    std::optional<ScaleParams> params;
    std::vector<ScenarioError> errors;

    bool ok() const { return params.has_value() && errors.empty(); }
};

// Scale-params override file: same schema as the scenario's "scale" object.
// Fields present in the overlay replace the base values.
ScaleParamsResult parse_scale_params_overlay(std::string_view text, ScaleParams base);

}  // namespace citybrain
