#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "citybrain/delay.hpp"
#include "citybrain/event_log.hpp"
#include "citybrain/ids.hpp"
#include "citybrain/reflex.hpp"
#include "citybrain/sns_graph.hpp"
#include "citybrain/time.hpp"

namespace citybrain {

// Half-open [start, end) unavailability window.
struct OutageWindow {
    SimTime start;
    SimTime end;

    bool contains(SimTime t) const { return start <= t && t < end; }

    friend bool operator==(const OutageWindow&, const OutageWindow&) = default;
};

// A nerve fiber: message transport with a delay model, a random loss
// probability and scheduled outages.
struct Channel {
    ChannelId id;
    DelayModel delay;
    double failure_probability = 0.0;
    std::vector<OutageWindow> outages;

    bool in_outage(SimTime t) const;

    friend bool operator==(const Channel&, const Channel&) = default;
};

struct Stimulus {
    std::string id;
    ArcId target_arc;
    SimTime time;
    double intensity = 0.0;

    friend bool operator==(const Stimulus&, const Stimulus&) = default;
};

enum class DropReason { Outage, Random, NeuronOutage, CenterOutage, Horizon };
std::string_view to_string(DropReason reason);

struct Delivered {
    SimDuration after;
};
struct DroppedMsg {
    DropReason reason;
};
using DeliveryResult = std::variant<Delivered, DroppedMsg>;

// One send attempt: outage check first, then the random-loss draw, then the
// sampled transport delay.
DeliveryResult deliver(const Channel& channel, SimTime at, RngStream& rng);

enum class FailureTargetKind { Channel, Neuron, Center };
std::string_view to_string(FailureTargetKind kind);
std::optional<FailureTargetKind> failure_target_kind_from(std::string_view name);

struct FailureDirective {
    FailureTargetKind kind = FailureTargetKind::Channel;
    std::string target;  // channel or neuron id; ignored for Center
    OutageWindow window;

    friend bool operator==(const FailureDirective&, const FailureDirective&) = default;
};

struct SimClock {
    SimTime now;
    void advance_to(SimTime t);  // ClockRegression when t < now
};

// Deterministic discrete-event engine. Single-threaded per run; identical
// (inputs, seed) produce an identical event log. Arc specs passed to fire()
// must outlive run_to_horizon().
class SimKernel {
public:
    SimKernel(BigSnsGraph& graph, std::uint64_t seed, SimTime horizon);
    ~SimKernel();  // out of line: firing state is an incomplete type here

    void add_channel(Channel channel);
    void set_reaction_profile(const NeuronId& id, DelayModel model);
    void inject_failure(const FailureDirective& directive);
    void schedule_post(const Post& post);
    std::string fire(const ReflexArcSpec& arc, const Stimulus& stimulus);

    // Dispatch until quiescent or past the horizon; anything still pending is
    // logged as dropped at the horizon.
    void run_to_horizon();

    SimTime now() const { return clock_.now; }
    SimTime horizon() const { return horizon_; }
    const EventLog& log() const { return log_; }
    EventLog take_log() { return std::move(log_); }
    std::vector<ChannelId> channel_ids() const;
    const BigSnsGraph& graph() const { return graph_; }

private:
    struct FiringState;

    struct PendingEvent {
        SimTime time;
        std::uint64_t order = 0;
        std::function<void()> run;
        std::function<void()> drop;  // logs the horizon-drop records
    };
    struct EventAfter {
        bool operator()(const PendingEvent& a, const PendingEvent& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.order > b.order;
        }
    };

    void schedule(SimTime t, std::function<void()> run, std::function<void()> drop);
    RngStream& stream(const std::string& name);
    bool neuron_up(const NeuronId& id, SimTime t) const;
    bool center_up(SimTime t) const;
    SimDuration reaction_delay(const NeuronId& id);
    Channel& channel_state(const ChannelId& id);

    void dispatch_post(const Post& post);
    void dispatch_stimulus(FiringState& firing);
    void send_afferent(FiringState& firing);
    void afferent_delivered(FiringState& firing);
    void center_decide(FiringState& firing);
    void efferent_delivered(FiringState& firing);
    void actuate(FiringState& firing, const NeuronId& effector);

    void log_stage_reached(const FiringState& firing, ArcStage stage,
                           std::vector<std::pair<std::string, std::string>> extra = {});
    void log_stage_failed(const FiringState& firing, ArcStage stage, DropReason reason);

    BigSnsGraph& graph_;
    std::uint64_t root_seed_;
    SimTime horizon_;
    SimClock clock_;
    EventLog log_;

    std::priority_queue<PendingEvent, std::vector<PendingEvent>, EventAfter> queue_;
    std::uint64_t next_order_ = 0;

    std::vector<ChannelId> channel_order_;
    std::unordered_map<ChannelId, Channel> channels_;
    std::unordered_map<NeuronId, DelayModel> reaction_profiles_;
    std::unordered_map<NeuronId, std::vector<OutageWindow>> neuron_outages_;
    std::vector<OutageWindow> center_outages_;
    std::unordered_map<std::string, RngStream> streams_;
    std::vector<std::unique_ptr<FiringState>> firings_;
};

// Default reaction profile for humans without a declared one.
DelayModel default_reaction_profile();

struct ScenarioConfig;

// Build the graph, run every scheduled stimulus, post and failure directive,
// and return the complete log. A pure function of (scenario, seed).
EventLog run_scenario(const ScenarioConfig& scenario, std::uint64_t seed);

}  // namespace citybrain
