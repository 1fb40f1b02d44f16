#include "citybrain/sim_kernel.hpp"

#include <utility>

#include "citybrain/errors.hpp"
#include "citybrain/scenario.hpp"

namespace citybrain {

std::string_view to_string(DropReason reason) {
    switch (reason) {
        case DropReason::Outage: return "Outage";
        case DropReason::Random: return "Random";
        case DropReason::NeuronOutage: return "NeuronOutage";
        case DropReason::CenterOutage: return "CenterOutage";
        case DropReason::Horizon: return "Horizon";
    }
    return "?";
}

std::string_view to_string(FailureTargetKind kind) {
    switch (kind) {
        case FailureTargetKind::Channel: return "Channel";
        case FailureTargetKind::Neuron: return "Neuron";
        case FailureTargetKind::Center: return "Center";
    }
    return "?";
}

std::optional<FailureTargetKind> failure_target_kind_from(std::string_view name) {
    for (auto kind :
         {FailureTargetKind::Channel, FailureTargetKind::Neuron, FailureTargetKind::Center}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

bool Channel::in_outage(SimTime t) const {
    for (const auto& window : outages) {
        if (window.contains(t)) return true;
    }
    return false;
}

DeliveryResult deliver(const Channel& channel, SimTime at, RngStream& rng) {
    if (channel.in_outage(at)) return DroppedMsg{DropReason::Outage};
    // Draw only when loss is possible, so loss-free channels consume no
    // randomness for the decision.
    if (channel.failure_probability > 0.0 && rng.uniform01() < channel.failure_probability) {
        return DroppedMsg{DropReason::Random};
    }
    return Delivered{sample_delay(channel.delay, rng)};
}

void SimClock::advance_to(SimTime t) {
    if (t < now) {
        throw SimError(Errc::ClockRegression,
                       "clock cannot move from " + now.text() + " back to " + t.text());
    }
    now = t;
}

DelayModel default_reaction_profile() { return DelayModel::constant(1.0); }

// Everything one firing carries between its pipeline events. Owned by the
// kernel so the scheduled closures can hold plain pointers.
struct SimKernel::FiringState {
    const ReflexArcSpec* arc = nullptr;
    Stimulus stimulus;
    NeuronId receptor;
    bool terminal = false;  // outcome already logged; later events stay quiet
};

SimKernel::SimKernel(BigSnsGraph& graph, std::uint64_t seed, SimTime horizon)
    : graph_(graph), root_seed_(seed), horizon_(horizon) {
    if (horizon <= SimTime()) {
        throw SimError(Errc::BadWindow, "horizon must be positive, got " + horizon.text());
    }
}

SimKernel::~SimKernel() = default;

void SimKernel::add_channel(Channel channel) {
    if (channel.id.empty()) {
        throw SimError(Errc::InvalidParams, "channel id must not be empty");
    }
    if (!channel.delay.valid()) {
        throw SimError(Errc::InvalidParams,
                       "channel '" + channel.id.value + "' has an invalid delay model");
    }
    if (!(channel.failure_probability >= 0.0 && channel.failure_probability <= 1.0)) {
        throw SimError(Errc::InvalidParams, "channel '" + channel.id.value +
                                                "' failure probability must lie in [0, 1]");
    }
    ChannelId id = channel.id;
    if (!channels_.emplace(id, std::move(channel)).second) {
        throw SimError(Errc::DuplicateId, "channel '" + id.value + "' already declared");
    }
    channel_order_.push_back(std::move(id));
}

void SimKernel::set_reaction_profile(const NeuronId& id, DelayModel model) {
    if (!graph_.contains(id)) {
        throw SimError(Errc::UnknownNeuron, "reaction profile for unregistered '" + id.value + "'");
    }
    if (!model.valid()) {
        throw SimError(Errc::InvalidParams, "reaction profile for '" + id.value + "' is invalid");
    }
    reaction_profiles_[id] = model;
}

void SimKernel::inject_failure(const FailureDirective& directive) {
    const auto& window = directive.window;
    if (window.start < SimTime() || window.end < window.start || window.end > horizon_) {
        throw SimError(Errc::BadWindow, "failure window [" + window.start.text() + ", " +
                                            window.end.text() + ") must lie within the horizon");
    }
    std::string subject;
    switch (directive.kind) {
        case FailureTargetKind::Channel: {
            channel_state(ChannelId{directive.target}).outages.push_back(window);
            subject = directive.target;
            break;
        }
        case FailureTargetKind::Neuron: {
            NeuronId id{directive.target};
            if (!graph_.contains(id)) {
                throw SimError(Errc::UnknownTarget,
                               "failure targets unknown neuron '" + directive.target + "'");
            }
            neuron_outages_[id].push_back(window);
            subject = directive.target;
            break;
        }
        case FailureTargetKind::Center: {
            center_outages_.push_back(window);
            subject = "center";
            break;
        }
    }
    const std::vector<std::pair<std::string, std::string>> details{
        {keys::kind, std::string(to_string(directive.kind))},
        {keys::window_start, window.start.text()},
        {keys::window_end, window.end.text()},
    };
    schedule(
        window.start,
        [this, subject, details] {
            log_.append(clock_.now, EventKind::FailureInjected, {subject}, details);
        },
        {});
    schedule(
        window.end,
        [this, subject, details] {
            log_.append(clock_.now, EventKind::FailureCleared, {subject}, details);
        },
        {});
}

void SimKernel::schedule_post(const Post& post) {
    if (!graph_.contains(post.author)) {
        throw SimError(Errc::UnknownNeuron, "post by unregistered '" + post.author.value + "'");
    }
    schedule(
        post.timestamp, [this, post] { dispatch_post(post); },
        [this, post] {
            // Past the horizon the attempt is still accounted for, as a
            // send/drop pair, so the log balances.
            log_.append(clock_.now, EventKind::MessageSent, {post.author.value},
                        {{keys::payload, std::string(to_string(post.payload_kind))},
                         {keys::body, post.body}});
            log_.append(clock_.now, EventKind::MessageDropped, {post.author.value},
                        {{keys::payload, std::string(to_string(post.payload_kind))},
                         {keys::reason, std::string(to_string(DropReason::Horizon))}});
        });
}

void SimKernel::dispatch_post(const Post& post) {
    log_.append(clock_.now, EventKind::MessageSent, {post.author.value},
                {{keys::payload, std::string(to_string(post.payload_kind))},
                 {keys::body, post.body}});
    if (!neuron_up(post.author, clock_.now)) {
        log_.append(clock_.now, EventKind::MessageDropped, {post.author.value},
                    {{keys::payload, std::string(to_string(post.payload_kind))},
                     {keys::reason, std::string(to_string(DropReason::NeuronOutage))}});
        return;
    }
    graph_.post_status(post.author, clock_.now, post.payload_kind, post.body);
    log_.append(clock_.now, EventKind::MessageDelivered, {post.author.value},
                {{keys::payload, std::string(to_string(post.payload_kind))}});
}

std::string SimKernel::fire(const ReflexArcSpec& arc, const Stimulus& stimulus) {
    if (stimulus.time < clock_.now) {
        throw SimError(Errc::ClockRegression, "stimulus '" + stimulus.id + "' at " +
                                                  stimulus.time.text() + " is before the clock");
    }
    if (!(stimulus.intensity >= 0.0 && stimulus.intensity <= 1.0)) {
        throw SimError(Errc::InvalidParams,
                       "stimulus '" + stimulus.id + "' intensity must lie in [0, 1]");
    }
    classify_arc(arc, graph_);  // rejects malformed arcs up front

    firings_.push_back(std::make_unique<FiringState>());
    FiringState* firing = firings_.back().get();
    firing->arc = &arc;
    firing->stimulus = stimulus;

    schedule(
        stimulus.time, [this, firing] { dispatch_stimulus(*firing); },
        [this, firing] {
            if (firing->terminal) return;
            firing->terminal = true;
            log_stage_failed(*firing, ArcStage::StimulusReceived, DropReason::Horizon);
        });
    return stimulus.id;
}

void SimKernel::dispatch_stimulus(FiringState& firing) {
    const ReflexArcSpec& arc = *firing.arc;
    // First receptor still standing takes the stimulus.
    const NeuronId* chosen = nullptr;
    for (const auto& id : arc.receptors) {
        if (neuron_up(id, clock_.now)) {
            chosen = &id;
            break;
        }
    }
    if (chosen == nullptr) {
        firing.terminal = true;
        log_stage_failed(firing, ArcStage::StimulusReceived, DropReason::NeuronOutage);
        return;
    }
    firing.receptor = *chosen;
    log_stage_reached(firing, ArcStage::StimulusReceived, {{keys::receptor, chosen->value}});

    SimDuration reaction;
    if (graph_.find(firing.receptor)->kind == NeuronKind::Human) {
        reaction = reaction_delay(firing.receptor);
    }
    schedule(
        clock_.now + reaction, [this, &firing] { send_afferent(firing); },
        [this, &firing] {
            if (firing.terminal) return;
            firing.terminal = true;
            log_stage_failed(firing, ArcStage::AfferentDelivered, DropReason::Horizon);
        });
}

void SimKernel::send_afferent(FiringState& firing) {
    const ReflexArcSpec& arc = *firing.arc;
    Channel& channel = channel_state(arc.afferent);
    const std::vector<std::pair<std::string, std::string>> tags{
        {keys::arc, arc.arc_id.value},
        {keys::stimulus, firing.stimulus.id},
        {keys::leg, "afferent"},
    };
    log_.append(clock_.now, EventKind::MessageSent, {channel.id.value}, tags);
    auto result = deliver(channel, clock_.now, stream("channel:" + channel.id.value));
    if (const auto* dropped = std::get_if<DroppedMsg>(&result)) {
        auto details = tags;
        details.emplace_back(keys::reason, std::string(to_string(dropped->reason)));
        log_.append(clock_.now, EventKind::MessageDropped, {channel.id.value}, details);
        firing.terminal = true;
        log_stage_failed(firing, ArcStage::AfferentDelivered, dropped->reason);
        return;
    }
    schedule(
        clock_.now + std::get<Delivered>(result).after,
        [this, &firing] { afferent_delivered(firing); },
        [this, &firing, tags] {
            if (firing.terminal) return;
            firing.terminal = true;
            auto details = tags;
            details.emplace_back(keys::reason, std::string(to_string(DropReason::Horizon)));
            log_.append(clock_.now, EventKind::MessageDropped,
                        {firing.arc->afferent.value}, details);
            log_stage_failed(firing, ArcStage::AfferentDelivered, DropReason::Horizon);
        });
}

void SimKernel::afferent_delivered(FiringState& firing) {
    const ReflexArcSpec& arc = *firing.arc;
    log_.append(clock_.now, EventKind::MessageDelivered, {arc.afferent.value},
                {{keys::arc, arc.arc_id.value},
                 {keys::stimulus, firing.stimulus.id},
                 {keys::leg, "afferent"}});
    log_stage_reached(firing, ArcStage::AfferentDelivered);

    // The center is checked the moment work would start on the message.
    if (!center_up(clock_.now)) {
        firing.terminal = true;
        log_stage_failed(firing, ArcStage::CenterDecided, DropReason::CenterOutage);
        return;
    }
    const SimDuration processing =
        sample_delay(arc.center.processing_delay, stream("center:" + arc.arc_id.value));
    schedule(
        clock_.now + processing, [this, &firing] { center_decide(firing); },
        [this, &firing] {
            if (firing.terminal) return;
            firing.terminal = true;
            log_stage_failed(firing, ArcStage::CenterDecided, DropReason::Horizon);
        });
}

void SimKernel::center_decide(FiringState& firing) {
    const ReflexArcSpec& arc = *firing.arc;
    const bool act = firing.stimulus.intensity >= arc.center.decision_threshold;
    log_stage_reached(firing, ArcStage::CenterDecided,
                      {{keys::decision, act ? "actuate" : "suppress"}});
    if (!act) {
        firing.terminal = true;
        return;
    }

    Channel& channel = channel_state(arc.efferent);
    const std::vector<std::pair<std::string, std::string>> tags{
        {keys::arc, arc.arc_id.value},
        {keys::stimulus, firing.stimulus.id},
        {keys::leg, "efferent"},
    };
    log_.append(clock_.now, EventKind::MessageSent, {channel.id.value}, tags);
    auto result = deliver(channel, clock_.now, stream("channel:" + channel.id.value));
    if (const auto* dropped = std::get_if<DroppedMsg>(&result)) {
        auto details = tags;
        details.emplace_back(keys::reason, std::string(to_string(dropped->reason)));
        log_.append(clock_.now, EventKind::MessageDropped, {channel.id.value}, details);
        firing.terminal = true;
        log_stage_failed(firing, ArcStage::EfferentDelivered, dropped->reason);
        return;
    }
    schedule(
        clock_.now + std::get<Delivered>(result).after,
        [this, &firing] { efferent_delivered(firing); },
        [this, &firing, tags] {
            if (firing.terminal) return;
            firing.terminal = true;
            auto details = tags;
            details.emplace_back(keys::reason, std::string(to_string(DropReason::Horizon)));
            log_.append(clock_.now, EventKind::MessageDropped,
                        {firing.arc->efferent.value}, details);
            log_stage_failed(firing, ArcStage::EfferentDelivered, DropReason::Horizon);
        });
}

void SimKernel::efferent_delivered(FiringState& firing) {
    const ReflexArcSpec& arc = *firing.arc;
    log_.append(clock_.now, EventKind::MessageDelivered, {arc.efferent.value},
                {{keys::arc, arc.arc_id.value},
                 {keys::stimulus, firing.stimulus.id},
                 {keys::leg, "efferent"}});
    log_stage_reached(firing, ArcStage::EfferentDelivered);

    // Fan out to every effector that is up; the earliest to finish marks the
    // stage, the rest still log their own actuation.
    bool any = false;
    for (const auto& id : arc.effectors) {
        if (!neuron_up(id, clock_.now)) continue;
        any = true;
        SimDuration reaction;
        if (graph_.find(id)->kind == NeuronKind::Human) {
            reaction = reaction_delay(id);
        }
        schedule(
            clock_.now + reaction, [this, &firing, id] { actuate(firing, id); },
            [this, &firing] {
                if (firing.terminal) return;
                firing.terminal = true;
                log_stage_failed(firing, ArcStage::EffectorActuated, DropReason::Horizon);
            });
    }
    if (!any) {
        firing.terminal = true;
        log_stage_failed(firing, ArcStage::EffectorActuated, DropReason::NeuronOutage);
    }
}

void SimKernel::actuate(FiringState& firing, const NeuronId& effector) {
    if (!firing.terminal) {
        firing.terminal = true;
        log_stage_reached(firing, ArcStage::EffectorActuated);
    }
    log_.append(clock_.now, EventKind::ActuationDone, {effector.value},
                {{keys::arc, firing.arc->arc_id.value},
                 {keys::stimulus, firing.stimulus.id},
                 {keys::command, std::string(to_string(firing.arc->center.action))}});
}

void SimKernel::run_to_horizon() {
    while (!queue_.empty() && queue_.top().time <= horizon_) {
        PendingEvent event = queue_.top();
        queue_.pop();
        clock_.advance_to(event.time);
        event.run();
    }
    clock_.advance_to(horizon_);
    // Whatever is still queued lies beyond the horizon; account for it in
    // (time, scheduling) order.
    while (!queue_.empty()) {
        PendingEvent event = queue_.top();
        queue_.pop();
        if (event.drop) event.drop();
    }
}

std::vector<ChannelId> SimKernel::channel_ids() const { return channel_order_; }

void SimKernel::schedule(SimTime t, std::function<void()> run, std::function<void()> drop) {
    if (t < clock_.now) {
        throw SimError(Errc::ClockRegression,
                       "event at " + t.text() + " scheduled behind the clock");
    }
    queue_.push(PendingEvent{t, next_order_++, std::move(run), std::move(drop)});
}

RngStream& SimKernel::stream(const std::string& name) {
    auto it = streams_.find(name);
    if (it == streams_.end()) {
        it = streams_.emplace(name, RngStream(derive_stream_seed(root_seed_, name))).first;
    }
    return it->second;
}

bool SimKernel::neuron_up(const NeuronId& id, SimTime t) const {
    auto it = neuron_outages_.find(id);
    if (it == neuron_outages_.end()) return true;
    for (const auto& window : it->second) {
        if (window.contains(t)) return false;
    }
    return true;
}

bool SimKernel::center_up(SimTime t) const {
    for (const auto& window : center_outages_) {
        if (window.contains(t)) return false;
    }
    return true;
}

SimDuration SimKernel::reaction_delay(const NeuronId& id) {
    auto it = reaction_profiles_.find(id);
    const DelayModel model = it == reaction_profiles_.end() ? default_reaction_profile()
                                                            : it->second;
    return sample_delay(model, stream("neuron:" + id.value));
}

Channel& SimKernel::channel_state(const ChannelId& id) {
    auto it = channels_.find(id);
    if (it == channels_.end()) {
        throw SimError(Errc::UnknownTarget, "channel '" + id.value + "' is not declared");
    }
    return it->second;
}

void SimKernel::log_stage_reached(const FiringState& firing, ArcStage stage,
                                  std::vector<std::pair<std::string, std::string>> extra) {
    std::vector<std::pair<std::string, std::string>> details{
        {keys::stimulus, firing.stimulus.id},
        {keys::stage, std::string(to_string(stage))},
        {keys::status, "reached"},
    };
    for (auto& pair : extra) details.push_back(std::move(pair));
    log_.append(clock_.now, EventKind::StageTransition, {firing.arc->arc_id.value},
                std::move(details));
}

void SimKernel::log_stage_failed(const FiringState& firing, ArcStage stage, DropReason reason) {
    log_.append(clock_.now, EventKind::StageTransition, {firing.arc->arc_id.value},
                {{keys::stimulus, firing.stimulus.id},
                 {keys::stage, std::string(to_string(stage))},
                 {keys::status, "failed"},
                 {keys::reason, std::string(to_string(reason))}});
}

EventLog run_scenario(const ScenarioConfig& scenario, std::uint64_t seed) {
    auto errors = validate_scenario(scenario);
    if (!errors.empty()) {
        throw SimError(Errc::InvalidScenario, errors.front().path + ": " + errors.front().message);
    }
    BigSnsGraph graph = build_graph(scenario);
    SimKernel kernel(graph, seed, scenario.metadata.horizon);
    for (const auto& channel : scenario.channels) kernel.add_channel(channel);
    for (const auto& decl : scenario.neurons) {
        if (decl.reaction) kernel.set_reaction_profile(decl.neuron.id, *decl.reaction);
    }
    for (const auto& directive : scenario.failures) kernel.inject_failure(directive);
    for (const auto& post : scenario.posts) kernel.schedule_post(post);
    for (const auto& stimulus : scenario.stimuli) {
        kernel.fire(*find_arc(scenario, stimulus.target_arc), stimulus);
    }
    kernel.run_to_horizon();
    return kernel.take_log();
}

}  // namespace citybrain
