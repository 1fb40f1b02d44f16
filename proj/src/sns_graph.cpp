#include "citybrain/sns_graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "citybrain/errors.hpp"

namespace citybrain {

std::string_view to_string(NeuronKind kind) {
    switch (kind) {
        case NeuronKind::Human: return "Human";
        case NeuronKind::Organization: return "Organization";
        case NeuronKind::Sensor: return "Sensor";
        case NeuronKind::SmartDevice: return "SmartDevice";
        case NeuronKind::SmartProgram: return "SmartProgram";
    }
    return "?";
}

std::string_view to_string(CensusCategory category) {
    switch (category) {
        case CensusCategory::Resident: return "Resident";
        case CensusCategory::BusinessOrg: return "BusinessOrg";
        case CensusCategory::GovernmentAgency: return "GovernmentAgency";
        case CensusCategory::CityEquipment: return "CityEquipment";
    }
    return "?";
}

std::string_view to_string(PayloadKind kind) {
    switch (kind) {
        case PayloadKind::Status: return "Status";
        case PayloadKind::Alarm: return "Alarm";
        case PayloadKind::Command: return "Command";
        case PayloadKind::Chat: return "Chat";
    }
    return "?";
}

std::optional<NeuronKind> neuron_kind_from(std::string_view name) {
    for (auto kind : {NeuronKind::Human, NeuronKind::Organization, NeuronKind::Sensor,
                      NeuronKind::SmartDevice, NeuronKind::SmartProgram}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

std::optional<CensusCategory> census_category_from(std::string_view name) {
    for (auto category : {CensusCategory::Resident, CensusCategory::BusinessOrg,
                          CensusCategory::GovernmentAgency, CensusCategory::CityEquipment}) {
        if (to_string(category) == name) return category;
    }
    return std::nullopt;
}

std::optional<PayloadKind> payload_kind_from(std::string_view name) {
    for (auto kind :
         {PayloadKind::Status, PayloadKind::Alarm, PayloadKind::Command, PayloadKind::Chat}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

bool Census::all_zero() const {
    return std::all_of(counts.begin(), counts.end(), [](std::uint64_t c) { return c == 0; });
}

const Neuron& BigSnsGraph::register_neuron(Neuron neuron) {
    if (neuron.id.value.empty()) {
        throw SimError(Errc::InvalidParams, "neuron id must not be empty");
    }
    auto [it, inserted] = by_id_.emplace(neuron.id.value, neurons_.size());
    if (!inserted) {
        throw SimError(Errc::DuplicateId, "neuron '" + neuron.id.value + "' already registered");
    }
    neurons_.push_back(std::move(neuron));
    timelines_.emplace_back();
    return neurons_.back();
}

FollowEdge BigSnsGraph::connect(const NeuronId& from, const NeuronId& to) {
    const std::size_t a = index_of(from);
    const std::size_t b = index_of(to);
    if (a == b) {
        throw SimError(Errc::SelfLoop, "neuron '" + from.value + "' cannot follow itself");
    }
    FollowEdge edge{from, to};
    if (edge_keys_.insert({a, b}).second) {
        edges_.push_back(edge);
    }
    return edge;
}

const Post& BigSnsGraph::post_status(const NeuronId& author, SimTime time,
                                     PayloadKind payload_kind, std::string body) {
    auto& timeline = timelines_[index_of(author)];
    if (!timeline.empty() && time < timeline.back().timestamp) {
        throw SimError(Errc::ClockRegression, "post at " + time.text() + " precedes last post at " +
                                                  timeline.back().timestamp.text() + " by '" +
                                                  author.value + "'");
    }
    timeline.push_back(Post{author, time, payload_kind, std::move(body)});
    ++total_posts_;
    return timeline.back();
}

double BigSnsGraph::largest_component_fraction() const {
    if (neurons_.empty()) {
        throw SimError(Errc::EmptyGraph, "component fraction needs at least one neuron");
    }
    // Union-find over neuron indexes, edges undirected.
    std::vector<std::size_t> parent(neurons_.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&parent](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [a, b] : edge_keys_) {
        parent[find(a)] = find(b);
    }
    std::unordered_map<std::size_t, std::size_t> sizes;
    std::size_t largest = 0;
    for (std::size_t i = 0; i < neurons_.size(); ++i) {
        largest = std::max(largest, ++sizes[find(i)]);
    }
    return static_cast<double>(largest) / static_cast<double>(neurons_.size());
}

std::size_t BigSnsGraph::system_label_count() const {
    std::set<std::string_view> labels;
    for (const auto& neuron : neurons_) {
        if (!neuron.system_label.empty()) labels.insert(neuron.system_label);
    }
    return labels.size();
}

CoverageReport BigSnsGraph::census_coverage(const Census& census) const {
    if (census.all_zero()) {
        throw SimError(Errc::AllCensusZero, "census has no population in any category");
    }
    const auto registered = registered_counts();
    CoverageReport report;
    double sum = 0.0;
    for (std::size_t i = 0; i < kCensusCategoryCount; ++i) {
        if (census.counts[i] == 0) continue;
        const double ratio = std::min(
            1.0, static_cast<double>(registered[i]) / static_cast<double>(census.counts[i]));
        report.ratio[i] = ratio;
        sum += ratio;
        ++report.scored_categories;
    }
    report.mean = sum / static_cast<double>(report.scored_categories);
    return report;
}

double BigSnsGraph::activeness_rate(SimTime from, SimTime to) const {
    if (to <= from) {
        throw SimError(Errc::BadWindow, "activeness window [" + from.text() + ", " + to.text() +
                                            "] must have positive length");
    }
    if (neurons_.empty()) {
        throw SimError(Errc::EmptyGraph, "activeness rate needs at least one neuron");
    }
    std::size_t in_window = 0;
    for (const auto& timeline : timelines_) {
        for (const auto& post : timeline) {
            if (from <= post.timestamp && post.timestamp <= to) ++in_window;
        }
    }
    const double window = (to - from).units();
    return static_cast<double>(in_window) / (static_cast<double>(neurons_.size()) * window);
}

bool BigSnsGraph::contains(const NeuronId& id) const { return by_id_.count(id.value) != 0; }

const Neuron* BigSnsGraph::find(const NeuronId& id) const {
    auto it = by_id_.find(id.value);
    return it == by_id_.end() ? nullptr : &neurons_[it->second];
}

std::span<const Post> BigSnsGraph::timeline(const NeuronId& id) const {
    return timelines_[index_of(id)];
}

std::array<std::uint64_t, kCensusCategoryCount> BigSnsGraph::registered_counts() const {
    std::array<std::uint64_t, kCensusCategoryCount> counts{};
    for (const auto& neuron : neurons_) {
        ++counts[static_cast<std::size_t>(neuron.census_category)];
    }
    return counts;
}

std::size_t BigSnsGraph::index_of(const NeuronId& id) const {
    auto it = by_id_.find(id.value);
    if (it == by_id_.end()) {
        throw SimError(Errc::UnknownNeuron, "neuron '" + id.value + "' is not registered");
    }
    return it->second;
}

}  // namespace citybrain
