#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "citybrain/ids.hpp"
#include "citybrain/time.hpp"

namespace citybrain {

enum class NeuronKind { Human, Organization, Sensor, SmartDevice, SmartProgram };
enum class CensusCategory { Resident, BusinessOrg, GovernmentAgency, CityEquipment };
enum class PayloadKind { Status, Alarm, Command, Chat };

inline constexpr std::size_t kCensusCategoryCount = 4;

std::string_view to_string(NeuronKind kind);
std::string_view to_string(CensusCategory category);
std::string_view to_string(PayloadKind kind);
std::optional<NeuronKind> neuron_kind_from(std::string_view name);
std::optional<CensusCategory> census_category_from(std::string_view name);
std::optional<PayloadKind> payload_kind_from(std::string_view name);

// A Big SNS participant: person, organization, sensor, smart device or smart program.
struct Neuron {
    NeuronId id;
    NeuronKind kind = NeuronKind::Human;
    CensusCategory census_category = CensusCategory::Resident;
    std::string system_label;
    std::string display_name;

    friend bool operator==(const Neuron&, const Neuron&) = default;
};

// Directed follow/link edge between two registered neurons.
struct FollowEdge {
    NeuronId from;
    NeuronId to;

    friend bool operator==(const FollowEdge&, const FollowEdge&) = default;
};

struct Post {
    NeuronId author;
    SimTime timestamp;
    PayloadKind payload_kind = PayloadKind::Status;
    std::string body;

    friend bool operator==(const Post&, const Post&) = default;
};

// City population baseline the registered neurons are measured against.
struct Census {
    std::array<std::uint64_t, kCensusCategoryCount> counts{};

    std::uint64_t& operator[](CensusCategory c) { return counts[static_cast<std::size_t>(c)]; }
    std::uint64_t operator[](CensusCategory c) const { return counts[static_cast<std::size_t>(c)]; }
    bool all_zero() const;

    friend bool operator==(const Census&, const Census&) = default;
};

struct CoverageReport {
    // Ratio per census category, nullopt where the census count is zero.
    std::array<std::optional<double>, kCensusCategoryCount> ratio{};
    double mean = 0.0;
    std::size_t scored_categories = 0;
};

// The city neural network: every participant holds an account, posts status
// updates to its own timeline and links to other participants.
class BigSnsGraph {
public:
    const Neuron& register_neuron(Neuron neuron);
    FollowEdge connect(const NeuronId& from, const NeuronId& to);
    const Post& post_status(const NeuronId& author, SimTime time, PayloadKind payload_kind,
                            std::string body);

    // Fraction of neurons inside the largest connected component, edges taken
    // as undirected. Empty graph is an error.
    double largest_component_fraction() const;

    // Diagnostic: number of distinct non-empty system labels (how fragmented
    // the deployment is across subsystems). Not part of any score.
    std::size_t system_label_count() const;

    // Per-category min(1, registered/census) plus the mean over categories
    // with a nonzero census count.
    CoverageReport census_coverage(const Census& census) const;

    // Posts per neuron per time unit over [from, to].
    double activeness_rate(SimTime from, SimTime to) const;

    std::size_t neuron_count() const { return neurons_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t post_count() const { return total_posts_; }
    bool contains(const NeuronId& id) const;
    const Neuron* find(const NeuronId& id) const;
    const std::vector<Neuron>& neurons() const { return neurons_; }
    const std::vector<FollowEdge>& edges() const { return edges_; }
    std::span<const Post> timeline(const NeuronId& id) const;
    std::array<std::uint64_t, kCensusCategoryCount> registered_counts() const;

private:
    std::size_t index_of(const NeuronId& id) const;

    std::vector<Neuron> neurons_;
    std::vector<std::vector<Post>> timelines_;
    std::vector<FollowEdge> edges_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::set<std::pair<std::size_t, std::size_t>> edge_keys_;
    std::size_t total_posts_ = 0;
};

}  // namespace citybrain
