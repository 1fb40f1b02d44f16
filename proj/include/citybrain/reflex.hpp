#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citybrain/delay.hpp"
#include "citybrain/event_log.hpp"
#include "citybrain/ids.hpp"
#include "citybrain/sns_graph.hpp"

namespace citybrain {

enum class ReceptorKind { Sensor, Human, Program };
enum class EffectorKind { Device, Human, Program };

std::string_view to_string(ReceptorKind kind);
std::string_view to_string(EffectorKind kind);

// Display letters: receptors A (sensor), B (human), C (program); effectors
// D (program), E (human), F (device).
std::string_view receptor_letter(ReceptorKind kind);
std::string_view effector_letter(EffectorKind kind);

// Which end of an arc a neuron kind may occupy. Organizations are SNS
// participants but never arc endpoints.
std::optional<ReceptorKind> receptor_kind_for(NeuronKind kind);
std::optional<EffectorKind> effector_kind_for(NeuronKind kind);

// One of the nine reaction-chain types, fixed by receptor and effector kind.
struct ArcType {
    int ordinal = 0;  // 1..9
    ReceptorKind receptor = ReceptorKind::Sensor;
    EffectorKind effector = EffectorKind::Device;

    std::string label() const;  // e.g. "A->F"

    friend bool operator==(const ArcType&, const ArcType&) = default;
};

const std::array<ArcType, 9>& arc_type_table();
ArcType arc_type_for(ReceptorKind receptor, EffectorKind effector);

// Canonical one-line example of each type, for listings.
std::string_view arc_type_example(int ordinal);

enum class CenterAction { Actuate, Notify, Escalate };
std::string_view to_string(CenterAction action);
std::optional<CenterAction> center_action_from(std::string_view name);

// The nerve-center decision stage: act when the stimulus intensity reaches
// the threshold, after a processing delay.
struct CenterPolicy {
    double decision_threshold = 0.5;
    DelayModel processing_delay = DelayModel::constant(0.0);
    CenterAction action = CenterAction::Actuate;

    friend bool operator==(const CenterPolicy&, const CenterPolicy&) = default;
};

// A declared five-component reaction chain: receptors, afferent channel,
// center policy, efferent channel, effectors.
struct ReflexArcSpec {
    ArcId arc_id;
    std::string category;
    std::vector<NeuronId> receptors;
    ChannelId afferent;
    CenterPolicy center;
    ChannelId efferent;
    std::vector<NeuronId> effectors;

    friend bool operator==(const ReflexArcSpec&, const ReflexArcSpec&) = default;
};

enum class ArcStage {
    StimulusReceived,
    AfferentDelivered,
    CenterDecided,
    EfferentDelivered,
    EffectorActuated,
};
inline constexpr std::size_t kArcStageCount = 5;

std::string_view to_string(ArcStage stage);
std::optional<ArcStage> arc_stage_from(std::string_view name);

enum class ArcOutcomeKind { Completed, Suppressed, Failed };

struct ArcOutcome {
    ArcOutcomeKind kind = ArcOutcomeKind::Failed;
    std::optional<ArcStage> failed_stage;  // set iff kind == Failed

    static ArcOutcome completed() { return {ArcOutcomeKind::Completed, std::nullopt}; }
    static ArcOutcome suppressed() { return {ArcOutcomeKind::Suppressed, std::nullopt}; }
    static ArcOutcome failed_at(ArcStage stage) { return {ArcOutcomeKind::Failed, stage}; }

    friend bool operator==(const ArcOutcome&, const ArcOutcome&) = default;
};

// Everything one firing did: which stages were reached and when, and how the
// firing ended.
struct ArcExecutionTrace {
    ArcId arc_id;
    std::string stimulus_id;
    std::array<std::optional<SimTime>, kArcStageCount> stage_times{};
    ArcOutcome outcome;

    std::optional<SimTime> stage_time(ArcStage stage) const {
        return stage_times[static_cast<std::size_t>(stage)];
    }

    friend bool operator==(const ArcExecutionTrace&, const ArcExecutionTrace&) = default;
};

enum class ArcDefect {
    MissingReceptor,
    MissingEffector,
    MissingAfferent,
    MissingEfferent,
    UnknownReceptor,
    UnknownEffector,
    IneligibleReceptorKind,
    IneligibleEffectorKind,
    MixedReceptorKinds,
    MixedEffectorKinds,
    UnknownAfferentChannel,
    UnknownEfferentChannel,
    InvalidThreshold,
    InvalidProcessingDelay,
};

std::string_view to_string(ArcDefect defect);

struct ArcViolation {
    ArcDefect defect;
    std::string message;

    friend bool operator==(const ArcViolation&, const ArcViolation&) = default;
};

// Empty result iff all five components are present, every referenced neuron is
// registered with an eligible and homogeneous kind, and both channels are known.
std::vector<ArcViolation> validate_arc(const ReflexArcSpec& spec, const BigSnsGraph& graph,
                                       std::span<const ChannelId> known_channels);

// The unique ArcType for the spec's receptor/effector kinds. A function of the
// kinds only. Throws MixedKinds / InvalidArc when the spec is not well formed.
ArcType classify_arc(const ReflexArcSpec& spec, const BigSnsGraph& graph);

// EffectorActuated minus StimulusReceived for Completed traces, absent otherwise.
std::optional<SimDuration> end_to_end_latency(const ArcExecutionTrace& trace);

// Rebuild the per-firing traces from a run's event log. Depends only on the
// multiset of records (grouped by arc and stimulus), not on record order.
std::vector<ArcExecutionTrace> extract_traces(const EventLog& log);

}  // namespace citybrain
