#include "citybrain/city_iq.hpp"

#include <algorithm>
#include <cmath>

#include "citybrain/errors.hpp"

namespace citybrain {

namespace {

constexpr std::array<std::string_view, 12> kStandardCategories{
    "Security",       "Finance",  "Traffic", "Logistics", "Energy",
    "Education",      "Community", "MedicalService", "Tourism", "Retail",
    "AgriculturalTrade", "EnvironmentalProtection"};

constexpr const char* kBaseScaleVersion = "2017";

}  // namespace

CategoryRegistry::CategoryRegistry() : scale_version_(kBaseScaleVersion) {
    names_.assign(kStandardCategories.begin(), kStandardCategories.end());
}

std::span<const std::string_view> CategoryRegistry::standard_categories() {
    return kStandardCategories;
}

void CategoryRegistry::extend(std::string name) {
    if (name.empty()) {
        throw SimError(Errc::InvalidParams, "category name must not be empty");
    }
    if (contains(name)) {
        throw SimError(Errc::DuplicateCategory, "category '" + name + "' already registered");
    }
    names_.push_back(std::move(name));
    bump_version();
}

void CategoryRegistry::remove(std::string_view name) {
    if (std::find(kStandardCategories.begin(), kStandardCategories.end(), name) !=
        kStandardCategories.end()) {
        throw SimError(Errc::ProtectedCategory,
                       "standard category '" + std::string(name) + "' cannot be removed");
    }
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        throw SimError(Errc::UnknownTarget, "category '" + std::string(name) + "' not registered");
    }
    names_.erase(it);
    bump_version();
}

bool CategoryRegistry::contains(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

void CategoryRegistry::bump_version() {
    ++revision_;
    scale_version_ = std::string(kBaseScaleVersion) + "." + std::to_string(revision_);
}

std::string_view to_string(NoDataPolicy policy) {
    switch (policy) {
        case NoDataPolicy::ScoreZero: return "ScoreZero";
        case NoDataPolicy::Exclude: return "Exclude";
    }
    return "?";
}

std::optional<NoDataPolicy> nodata_policy_from(std::string_view name) {
    for (auto policy : {NoDataPolicy::ScoreZero, NoDataPolicy::Exclude}) {
        if (to_string(policy) == name) return policy;
    }
    return std::nullopt;
}

double ScaleParams::reference_latency_for(std::string_view category) const {
    auto it = reference_latency.find(std::string(category));
    return it == reference_latency.end() ? default_reference_latency : it->second;
}

void ScaleParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(default_reference_latency)) {
        throw SimError(Errc::InvalidParams, "default reference latency must be positive");
    }
    for (const auto& [category, latency] : reference_latency) {
        if (!positive(latency)) {
            throw SimError(Errc::InvalidParams,
                           "reference latency for '" + category + "' must be positive");
        }
    }
    // A zero half-rate is the saturated limit: any activity at all scores 1.
    if (!(std::isfinite(activeness_half_rate) && activeness_half_rate >= 0.0)) {
        throw SimError(Errc::InvalidParams, "activeness half-rate must be nonnegative");
    }
    if (!(weight_network >= 0.0) || !(weight_arcs >= 0.0) ||
        std::abs(weight_network + weight_arcs - 1.0) > 1e-12) {
        throw SimError(Errc::InvalidParams, "level-1 weights must be nonnegative and sum to 1");
    }
}

CategoryRegistry make_registry(const ScaleParams& params) {
    CategoryRegistry registry;
    for (const auto& extra : params.extra_categories) registry.extend(extra);
    return registry;
}

IndexScore network_robustness(const EventLog& log) {
    const auto sends = log.count(EventKind::MessageSent);
    if (sends == 0) return IndexScore::no_data();
    const auto drops = log.count(EventKind::MessageDropped);
    return IndexScore::of(1.0 - static_cast<double>(drops) / static_cast<double>(sends), sends);
}

IndexScore network_uniformity(const BigSnsGraph& graph) {
    if (graph.neuron_count() == 0) return IndexScore::no_data();
    return IndexScore::of(graph.largest_component_fraction(), graph.neuron_count());
}

IndexScore network_coverage(const BigSnsGraph& graph, const Census& census) {
    if (census.all_zero()) return IndexScore::no_data();
    const auto report = graph.census_coverage(census);
    return IndexScore::of(report.mean, report.scored_categories);
}

IndexScore network_activeness(const EventLog& log, const BigSnsGraph& graph,
                              SimTime window_start, SimTime window_end, double half_rate) {
    if (graph.neuron_count() == 0 || window_end <= window_start) return IndexScore::no_data();
    // Posts are the delivered messages that did not travel an arc leg.
    std::size_t posts = 0;
    for (const auto& record : log.records()) {
        if (record.kind != EventKind::MessageDelivered) continue;
        if (record.detail(keys::leg) != nullptr) continue;
        if (window_start <= record.time && record.time <= window_end) ++posts;
    }
    const double rate = static_cast<double>(posts) /
                        (static_cast<double>(graph.neuron_count()) *
                         (window_end - window_start).units());
    double value;
    if (rate == 0.0) {
        value = 0.0;
    } else if (half_rate == 0.0) {
        value = 1.0;
    } else {
        value = rate / (rate + half_rate);
    }
    return IndexScore::of(value, graph.neuron_count());
}

namespace {

const std::string* category_of(const ArcCategoryMap& categories, const ArcId& arc) {
    auto it = categories.find(arc.value);
    return it == categories.end() ? nullptr : &it->second;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace

IndexScore arc_response_speed(std::span<const ArcExecutionTrace> traces, std::string_view category,
                              const ArcCategoryMap& categories, double reference_latency) {
    std::vector<double> latencies;
    for (const auto& trace : traces) {
        const std::string* cat = category_of(categories, trace.arc_id);
        if (cat == nullptr || *cat != category) continue;
        if (auto latency = end_to_end_latency(trace)) latencies.push_back(latency->units());
    }
    if (latencies.empty()) return IndexScore::no_data();
    const std::size_t samples = latencies.size();
    const double m = median(std::move(latencies));
    return IndexScore::of(1.0 / (1.0 + m / reference_latency), samples);
}

IndexScore arc_robustness(std::span<const ArcExecutionTrace> traces, std::string_view category,
                          const ArcCategoryMap& categories) {
    std::uint64_t completed = 0;
    std::uint64_t attempts = 0;
    for (const auto& trace : traces) {
        const std::string* cat = category_of(categories, trace.arc_id);
        if (cat == nullptr || *cat != category) continue;
        switch (trace.outcome.kind) {
            case ArcOutcomeKind::Completed:
                ++completed;
                ++attempts;
                break;
            case ArcOutcomeKind::Failed:
                ++attempts;
                break;
            case ArcOutcomeKind::Suppressed:
                break;  // a correct decision not to act is neither
        }
    }
    if (attempts == 0) return IndexScore::no_data();
    return IndexScore::of(static_cast<double>(completed) / static_cast<double>(attempts),
                          attempts);
}

namespace {

// Mean of index values under the no-data policy; `denominator` counts the
// NoData entries too under ScoreZero.
double policy_mean(std::span<const IndexScore> scores, NoDataPolicy policy) {
    double sum = 0.0;
    std::size_t measured = 0;
    for (const auto& score : scores) {
        if (score.has_data()) {
            sum += score.value;
            ++measured;
        }
    }
    if (policy == NoDataPolicy::ScoreZero) {
        return scores.empty() ? 0.0 : sum / static_cast<double>(scores.size());
    }
    return measured == 0 ? 0.0 : sum / static_cast<double>(measured);
}

}  // namespace

CityIqReport compute_city_iq(const BigSnsGraph& graph, const EventLog& log, const Census& census,
                             const ScaleParams& params, const CategoryRegistry& registry,
                             const ArcCategoryMap& arc_categories, SimTime window_start,
                             SimTime window_end) {
    params.validate();

    CityIqReport report;
    report.weight_network = params.weight_network;
    report.weight_arcs = params.weight_arcs;
    report.nodata_policy = params.nodata_policy;
    report.scale_version = registry.scale_version();

    report.network_robustness = network_robustness(log);
    report.network_uniformity = network_uniformity(graph);
    report.network_coverage = network_coverage(graph, census);
    report.network_activeness =
        network_activeness(log, graph, window_start, window_end, params.activeness_half_rate);

    const std::array<IndexScore, 4> network{report.network_robustness, report.network_uniformity,
                                            report.network_coverage, report.network_activeness};
    report.network_score = policy_mean(network, params.nodata_policy);

    const auto traces = extract_traces(log);
    double arc_sum = 0.0;
    std::size_t arc_counted = 0;
    for (const auto& name : registry.names()) {
        CategoryScores scores;
        scores.response_speed = arc_response_speed(traces, name, arc_categories,
                                                   params.reference_latency_for(name));
        scores.robustness = arc_robustness(traces, name, arc_categories);
        report.arc_indexes.emplace_back(name, scores);

        const std::array<IndexScore, 2> pair{scores.response_speed, scores.robustness};
        if (params.nodata_policy == NoDataPolicy::Exclude && !scores.response_speed.has_data() &&
            !scores.robustness.has_data()) {
            continue;  // category never measured at all
        }
        arc_sum += policy_mean(pair, params.nodata_policy);
        ++arc_counted;
    }
    if (params.nodata_policy == NoDataPolicy::ScoreZero) {
        report.arc_score =
            registry.names().empty() ? 0.0 : arc_sum / static_cast<double>(registry.names().size());
    } else {
        report.arc_score = arc_counted == 0 ? 0.0 : arc_sum / static_cast<double>(arc_counted);
    }

    report.city_iq =
        100.0 * (params.weight_network * report.network_score + params.weight_arcs * report.arc_score);
    return report;
}

}  // namespace citybrain
