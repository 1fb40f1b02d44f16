#include "citybrain/event_log.hpp"

#include <algorithm>

namespace citybrain {

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::MessageSent: return "MessageSent";
        case EventKind::MessageDelivered: return "MessageDelivered";
        case EventKind::MessageDropped: return "MessageDropped";
        case EventKind::StageTransition: return "StageTransition";
        case EventKind::FailureInjected: return "FailureInjected";
        case EventKind::FailureCleared: return "FailureCleared";
        case EventKind::ActuationDone: return "ActuationDone";
    }
    return "?";
}

std::optional<EventKind> event_kind_from(std::string_view name) {
    for (auto kind : {EventKind::MessageSent, EventKind::MessageDelivered,
                      EventKind::MessageDropped, EventKind::StageTransition,
                      EventKind::FailureInjected, EventKind::FailureCleared,
                      EventKind::ActuationDone}) {
        if (to_string(kind) == name) return kind;
    }
    return std::nullopt;
}

const std::string* EventRecord::detail(std::string_view key) const {
    for (const auto& [k, v] : details) {
        if (k == key) return &v;
    }
    return nullptr;
}

EventRecord& EventLog::append(SimTime time, EventKind kind, std::vector<std::string> subjects,
                              std::vector<std::pair<std::string, std::string>> details) {
    EventRecord record;
    record.seq = records_.size() + 1;
    record.time = time;
    record.kind = kind;
    record.subjects = std::move(subjects);
    record.details = std::move(details);
    records_.push_back(std::move(record));
    return records_.back();
}

void EventLog::append_record(EventRecord record) { records_.push_back(std::move(record)); }

std::size_t EventLog::count(EventKind kind) const {
    return static_cast<std::size_t>(std::count_if(
        records_.begin(), records_.end(), [kind](const EventRecord& r) { return r.kind == kind; }));
}

}  // namespace citybrain
