#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citybrain/event_log.hpp"
#include "citybrain/reflex.hpp"
#include "citybrain/sns_graph.hpp"

namespace citybrain {

// A level-2/level-3 index value. sample_count == 0 means the index could not
// be measured (NoData); value is kept at 0 in that case.
struct IndexScore {
    double value = 0.0;
    std::uint64_t sample_count = 0;

    bool has_data() const { return sample_count > 0; }
    static IndexScore no_data() { return {0.0, 0}; }
    static IndexScore of(double value, std::uint64_t samples) { return {value, samples}; }

    friend bool operator==(const IndexScore&, const IndexScore&) = default;
};

// The standard library of arc categories. The twelve standard members are
// protected; extensions may be added or removed, bumping the scale version.
class CategoryRegistry {
public:
    CategoryRegistry();

    static std::span<const std::string_view> standard_categories();

    void extend(std::string name);        // DuplicateCategory
    void remove(std::string_view name);   // ProtectedCategory / UnknownTarget

    bool contains(std::string_view name) const;
    const std::vector<std::string>& names() const { return names_; }
    const std::string& scale_version() const { return scale_version_; }

private:
    void bump_version();

    std::vector<std::string> names_;
    std::string scale_version_;
    int revision_ = 0;
};

enum class NoDataPolicy { ScoreZero, Exclude };
std::string_view to_string(NoDataPolicy policy);
std::optional<NoDataPolicy> nodata_policy_from(std::string_view name);

struct ScaleParams {
    double default_reference_latency = 1.0;
    std::map<std::string, double> reference_latency;  // per-category overrides
    double activeness_half_rate = 1.0;
    double weight_network = 0.5;
    double weight_arcs = 0.5;
    NoDataPolicy nodata_policy = NoDataPolicy::ScoreZero;
    std::vector<std::string> extra_categories;  // registry extensions

    double reference_latency_for(std::string_view category) const;
    void validate() const;  // throws InvalidParams

    friend bool operator==(const ScaleParams&, const ScaleParams&) = default;
};

CategoryRegistry make_registry(const ScaleParams& params);

using ArcCategoryMap = std::map<std::string, std::string>;  // arc id -> category

// Level-2 network index kernels.
IndexScore network_robustness(const EventLog& log);
IndexScore network_uniformity(const BigSnsGraph& graph);
IndexScore network_coverage(const BigSnsGraph& graph, const Census& census);
IndexScore network_activeness(const EventLog& log, const BigSnsGraph& graph,
                              SimTime window_start, SimTime window_end, double half_rate);

// Level-3 arc index kernels over reconstructed traces.
IndexScore arc_response_speed(std::span<const ArcExecutionTrace> traces, std::string_view category,
                              const ArcCategoryMap& categories, double reference_latency);
IndexScore arc_robustness(std::span<const ArcExecutionTrace> traces, std::string_view category,
                          const ArcCategoryMap& categories);

struct CategoryScores {
    IndexScore response_speed;
    IndexScore robustness;

    friend bool operator==(const CategoryScores&, const CategoryScores&) = default;
};

struct CityIqReport {
    IndexScore network_robustness;
    IndexScore network_uniformity;
    IndexScore network_coverage;
    IndexScore network_activeness;
    std::vector<std::pair<std::string, CategoryScores>> arc_indexes;  // registry order
    double network_score = 0.0;
    double arc_score = 0.0;
    double city_iq = 0.0;
    double weight_network = 0.5;
    double weight_arcs = 0.5;
    NoDataPolicy nodata_policy = NoDataPolicy::ScoreZero;
    std::string scale_version;

    friend bool operator==(const CityIqReport&, const CityIqReport&) = default;
};

// Full Table-style aggregation: level-3 -> level-2 -> level-1 -> one scalar
// in [0, 100].
CityIqReport compute_city_iq(const BigSnsGraph& graph, const EventLog& log, const Census& census,
                             const ScaleParams& params, const CategoryRegistry& registry,
                             const ArcCategoryMap& arc_categories, SimTime window_start,
                             SimTime window_end);

}  // namespace citybrain
