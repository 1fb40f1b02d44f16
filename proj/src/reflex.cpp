#include "citybrain/reflex.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "citybrain/errors.hpp"

namespace citybrain {

std::string_view to_string(ReceptorKind kind) {
    switch (kind) {
        case ReceptorKind::Sensor: return "Sensor";
        case ReceptorKind::Human: return "Human";
        case ReceptorKind::Program: return "Program";
    }
    return "?";
}

std::string_view to_string(EffectorKind kind) {
    switch (kind) {
        case EffectorKind::Device: return "Device";
        case EffectorKind::Human: return "Human";
        case EffectorKind::Program: return "Program";
    }
    return "?";
}

std::string_view receptor_letter(ReceptorKind kind) {
    switch (kind) {
        case ReceptorKind::Sensor: return "A";
        case ReceptorKind::Human: return "B";
        case ReceptorKind::Program: return "C";
    }
    return "?";
}

std::string_view effector_letter(EffectorKind kind) {
    switch (kind) {
        case EffectorKind::Device: return "F";
        case EffectorKind::Human: return "E";
        case EffectorKind::Program: return "D";
    }
    return "?";
}

std::optional<ReceptorKind> receptor_kind_for(NeuronKind kind) {
    switch (kind) {
        case NeuronKind::Sensor: return ReceptorKind::Sensor;
        case NeuronKind::Human: return ReceptorKind::Human;
        case NeuronKind::SmartProgram: return ReceptorKind::Program;
        case NeuronKind::SmartDevice:
        case NeuronKind::Organization: return std::nullopt;
    }
    return std::nullopt;
}

std::optional<EffectorKind> effector_kind_for(NeuronKind kind) {
    switch (kind) {
        case NeuronKind::SmartDevice: return EffectorKind::Device;
        case NeuronKind::Human: return EffectorKind::Human;
        case NeuronKind::SmartProgram: return EffectorKind::Program;
        case NeuronKind::Sensor:
        case NeuronKind::Organization: return std::nullopt;
    }
    return std::nullopt;
}

std::string ArcType::label() const {
    std::string text;
    text += receptor_letter(receptor);
    text += "->";
    text += effector_letter(effector);
    return text;
}

namespace {

// Ordinal layout: receptor blocks Sensor(1-3), Program(4-6), Human(7-9);
// within a block the effector runs Device, Human, Program.
constexpr std::array<ReceptorKind, 3> kReceptorOrder{ReceptorKind::Sensor, ReceptorKind::Program,
                                                     ReceptorKind::Human};
constexpr std::array<EffectorKind, 3> kEffectorOrder{EffectorKind::Device, EffectorKind::Human,
                                                     EffectorKind::Program};

std::array<ArcType, 9> build_arc_type_table() {
    std::array<ArcType, 9> table{};
    int ordinal = 1;
    for (auto receptor : kReceptorOrder) {
        for (auto effector : kEffectorOrder) {
            table[static_cast<std::size_t>(ordinal - 1)] = ArcType{ordinal, receptor, effector};
            ++ordinal;
        }
    }
    return table;
}

}  // namespace

const std::array<ArcType, 9>& arc_type_table() {
    static const std::array<ArcType, 9> table = build_arc_type_table();
    return table;
}

ArcType arc_type_for(ReceptorKind receptor, EffectorKind effector) {
    for (const auto& type : arc_type_table()) {
        if (type.receptor == receptor && type.effector == effector) return type;
    }
    throw SimError(Errc::InvalidArc, "no arc type for given receptor/effector kinds");
}

std::string_view arc_type_example(int ordinal) {
    switch (ordinal) {
        case 1: return "temperature sensor triggers a fire-extinguishing robot";
        case 2: return "smoke sensor alerts the on-duty fire brigade";
        case 3: return "air-quality sensor feeds the pollution forecast program";
        case 4: return "grid monitor program switches in a spare transformer";
        case 5: return "congestion monitor program pages a duty officer";
        case 6: return "capacity monitor program launches a cleanup program";
        case 7: return "night watchman's report dispatches a patrol robot";
        case 8: return "resident hotline call summons a repair crew";
        case 9: return "inspector's field note updates the risk-scoring program";
        default:
            throw SimError(Errc::InvalidParams,
                           "arc type ordinal must be 1..9, got " + std::to_string(ordinal));
    }
}

std::string_view to_string(CenterAction action) {
    switch (action) {
        case CenterAction::Actuate: return "Actuate";
        case CenterAction::Notify: return "Notify";
        case CenterAction::Escalate: return "Escalate";
    }
    return "?";
}

std::optional<CenterAction> center_action_from(std::string_view name) {
    for (auto action : {CenterAction::Actuate, CenterAction::Notify, CenterAction::Escalate}) {
        if (to_string(action) == name) return action;
    }
    return std::nullopt;
}

std::string_view to_string(ArcStage stage) {
    switch (stage) {
        case ArcStage::StimulusReceived: return "StimulusReceived";
        case ArcStage::AfferentDelivered: return "AfferentDelivered";
        case ArcStage::CenterDecided: return "CenterDecided";
        case ArcStage::EfferentDelivered: return "EfferentDelivered";
        case ArcStage::EffectorActuated: return "EffectorActuated";
    }
    return "?";
}

std::optional<ArcStage> arc_stage_from(std::string_view name) {
    for (auto stage : {ArcStage::StimulusReceived, ArcStage::AfferentDelivered,
                       ArcStage::CenterDecided, ArcStage::EfferentDelivered,
                       ArcStage::EffectorActuated}) {
        if (to_string(stage) == name) return stage;
    }
    return std::nullopt;
}

std::string_view to_string(ArcDefect defect) {
    switch (defect) {
        case ArcDefect::MissingReceptor: return "MissingReceptor";
        case ArcDefect::MissingEffector: return "MissingEffector";
        case ArcDefect::MissingAfferent: return "MissingAfferent";
        case ArcDefect::MissingEfferent: return "MissingEfferent";
        case ArcDefect::UnknownReceptor: return "UnknownReceptor";
        case ArcDefect::UnknownEffector: return "UnknownEffector";
        case ArcDefect::IneligibleReceptorKind: return "IneligibleReceptorKind";
        case ArcDefect::IneligibleEffectorKind: return "IneligibleEffectorKind";
        case ArcDefect::MixedReceptorKinds: return "MixedReceptorKinds";
        case ArcDefect::MixedEffectorKinds: return "MixedEffectorKinds";
        case ArcDefect::UnknownAfferentChannel: return "UnknownAfferentChannel";
        case ArcDefect::UnknownEfferentChannel: return "UnknownEfferentChannel";
        case ArcDefect::InvalidThreshold: return "InvalidThreshold";
        case ArcDefect::InvalidProcessingDelay: return "InvalidProcessingDelay";
    }
    return "?";
}

std::vector<ArcViolation> validate_arc(const ReflexArcSpec& spec, const BigSnsGraph& graph,
                                       std::span<const ChannelId> known_channels) {
    std::vector<ArcViolation> violations;
    auto flag = [&violations](ArcDefect defect, std::string message) {
        violations.push_back(ArcViolation{defect, std::move(message)});
    };

    if (spec.receptors.empty()) flag(ArcDefect::MissingReceptor, "arc declares no receptors");
    if (spec.effectors.empty()) flag(ArcDefect::MissingEffector, "arc declares no effectors");
    if (spec.afferent.value.empty()) flag(ArcDefect::MissingAfferent, "no afferent channel");
    if (spec.efferent.value.empty()) flag(ArcDefect::MissingEfferent, "no efferent channel");

    std::optional<ReceptorKind> receptor_kind;
    bool receptors_mixed = false;
    for (const auto& id : spec.receptors) {
        const Neuron* neuron = graph.find(id);
        if (neuron == nullptr) {
            flag(ArcDefect::UnknownReceptor, "receptor '" + id.value + "' is not registered");
            continue;
        }
        auto kind = receptor_kind_for(neuron->kind);
        if (!kind) {
            flag(ArcDefect::IneligibleReceptorKind,
                 "'" + id.value + "' (" + std::string(to_string(neuron->kind)) +
                     ") cannot act as a receptor");
            continue;
        }
        if (receptor_kind && *receptor_kind != *kind) receptors_mixed = true;
        if (!receptor_kind) receptor_kind = kind;
    }
    if (receptors_mixed) {
        flag(ArcDefect::MixedReceptorKinds, "receptors mix different kinds");
    }

    std::optional<EffectorKind> effector_kind;
    bool effectors_mixed = false;
    for (const auto& id : spec.effectors) {
        const Neuron* neuron = graph.find(id);
        if (neuron == nullptr) {
            flag(ArcDefect::UnknownEffector, "effector '" + id.value + "' is not registered");
            continue;
        }
        auto kind = effector_kind_for(neuron->kind);
        if (!kind) {
            flag(ArcDefect::IneligibleEffectorKind,
                 "'" + id.value + "' (" + std::string(to_string(neuron->kind)) +
                     ") cannot act as an effector");
            continue;
        }
        if (effector_kind && *effector_kind != *kind) effectors_mixed = true;
        if (!effector_kind) effector_kind = kind;
    }
    if (effectors_mixed) {
        flag(ArcDefect::MixedEffectorKinds, "effectors mix different kinds");
    }

    auto channel_known = [&known_channels](const ChannelId& id) {
        return std::any_of(known_channels.begin(), known_channels.end(),
                           [&id](const ChannelId& known) { return known == id; });
    };
    if (!spec.afferent.value.empty() && !channel_known(spec.afferent)) {
        flag(ArcDefect::UnknownAfferentChannel,
             "afferent channel '" + spec.afferent.value + "' is not declared");
    }
    if (!spec.efferent.value.empty() && !channel_known(spec.efferent)) {
        flag(ArcDefect::UnknownEfferentChannel,
             "efferent channel '" + spec.efferent.value + "' is not declared");
    }

    const double threshold = spec.center.decision_threshold;
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        flag(ArcDefect::InvalidThreshold, "decision threshold must lie in [0, 1]");
    }
    if (!spec.center.processing_delay.valid()) {
        flag(ArcDefect::InvalidProcessingDelay, "processing delay parameters are invalid");
    }
    return violations;
}

ArcType classify_arc(const ReflexArcSpec& spec, const BigSnsGraph& graph) {
    if (spec.receptors.empty() || spec.effectors.empty()) {
        throw SimError(Errc::InvalidArc,
                       "arc '" + spec.arc_id.value + "' needs receptors and effectors");
    }
    std::optional<ReceptorKind> receptor_kind;
    for (const auto& id : spec.receptors) {
        const Neuron* neuron = graph.find(id);
        if (neuron == nullptr) {
            throw SimError(Errc::UnknownNeuron, "receptor '" + id.value + "' is not registered");
        }
        auto kind = receptor_kind_for(neuron->kind);
        if (!kind) {
            throw SimError(Errc::InvalidArc, "'" + id.value + "' cannot act as a receptor");
        }
        if (receptor_kind && *receptor_kind != *kind) {
            throw SimError(Errc::MixedKinds,
                           "arc '" + spec.arc_id.value + "' mixes receptor kinds");
        }
        receptor_kind = kind;
    }
    std::optional<EffectorKind> effector_kind;
    for (const auto& id : spec.effectors) {
        const Neuron* neuron = graph.find(id);
        if (neuron == nullptr) {
            throw SimError(Errc::UnknownNeuron, "effector '" + id.value + "' is not registered");
        }
        auto kind = effector_kind_for(neuron->kind);
        if (!kind) {
            throw SimError(Errc::InvalidArc, "'" + id.value + "' cannot act as an effector");
        }
        if (effector_kind && *effector_kind != *kind) {
            throw SimError(Errc::MixedKinds,
                           "arc '" + spec.arc_id.value + "' mixes effector kinds");
        }
        effector_kind = kind;
    }
    return arc_type_for(*receptor_kind, *effector_kind);
}

std::optional<SimDuration> end_to_end_latency(const ArcExecutionTrace& trace) {
    if (trace.outcome.kind != ArcOutcomeKind::Completed) return std::nullopt;
    const auto start = trace.stage_time(ArcStage::StimulusReceived);
    const auto end = trace.stage_time(ArcStage::EffectorActuated);
    if (!start || !end) return std::nullopt;
    return *end - *start;
}

std::vector<ArcExecutionTrace> extract_traces(const EventLog& log) {
    // Keyed by (arc, stimulus); std::map keeps the result independent of
    // record order.
    std::map<std::pair<std::string, std::string>, ArcExecutionTrace> by_firing;
    std::map<std::pair<std::string, std::string>, std::optional<ArcOutcome>> outcomes;

    for (const auto& record : log.records()) {
        if (record.kind != EventKind::StageTransition) continue;
        const std::string* stimulus = record.detail(keys::stimulus);
        const std::string* stage_name = record.detail(keys::stage);
        const std::string* status = record.detail(keys::status);
        if (record.subjects.empty() || stimulus == nullptr || stage_name == nullptr ||
            status == nullptr) {
            continue;
        }
        const auto stage = arc_stage_from(*stage_name);
        if (!stage) continue;

        const std::pair<std::string, std::string> key{record.subjects.front(), *stimulus};
        auto& trace = by_firing[key];
        trace.arc_id = ArcId{key.first};
        trace.stimulus_id = key.second;
        auto& outcome = outcomes[key];

        if (*status == "failed") {
            outcome = ArcOutcome::failed_at(*stage);
            continue;
        }
        trace.stage_times[static_cast<std::size_t>(*stage)] = record.time;
        if (*stage == ArcStage::CenterDecided) {
            const std::string* decision = record.detail(keys::decision);
            if (decision != nullptr && *decision == "suppress") {
                outcome = ArcOutcome::suppressed();
            }
        }
        if (*stage == ArcStage::EffectorActuated && !outcome) {
            outcome = ArcOutcome::completed();
        }
    }

    std::vector<ArcExecutionTrace> traces;
    traces.reserve(by_firing.size());
    for (auto& [key, trace] : by_firing) {
        const auto& outcome = outcomes[key];
        if (outcome) {
            trace.outcome = *outcome;
        } else {
            // No terminal record; treat the first missing stage as the failure
            // point so a partial log still yields a well-formed trace.
            std::size_t first_absent = 0;
            while (first_absent < kArcStageCount && trace.stage_times[first_absent]) {
                ++first_absent;
            }
            trace.outcome = ArcOutcome::failed_at(
                static_cast<ArcStage>(std::min(first_absent, kArcStageCount - 1)));
        }
        traces.push_back(std::move(trace));
    }
    return traces;
}

}  // namespace citybrain
