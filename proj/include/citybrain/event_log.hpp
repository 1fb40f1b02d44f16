#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "citybrain/time.hpp"

namespace citybrain {

enum class EventKind {
    MessageSent,
    MessageDelivered,
    MessageDropped,
    StageTransition,
    FailureInjected,
    FailureCleared,
    ActuationDone,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> event_kind_from(std::string_view name);

// Detail keys shared between the kernel (writer) and trace/score readers.
namespace keys {
inline constexpr const char* arc = "arc";
inline constexpr const char* stimulus = "stimulus";
inline constexpr const char* stage = "stage";
inline constexpr const char* status = "status";
inline constexpr const char* decision = "decision";
inline constexpr const char* reason = "reason";
inline constexpr const char* channel = "channel";
inline constexpr const char* leg = "leg";
inline constexpr const char* kind = "kind";
inline constexpr const char* payload = "payload";
inline constexpr const char* body = "body";
inline constexpr const char* command = "command";
inline constexpr const char* receptor = "receptor";
inline constexpr const char* window_start = "window_start";
inline constexpr const char* window_end = "window_end";
inline constexpr const char* scheduled = "scheduled";
}  // namespace keys

struct EventRecord {
    std::uint64_t seq = 0;
    SimTime time;
    EventKind kind = EventKind::MessageSent;
    std::vector<std::string> subjects;
    // Ordered key/value pairs; order is part of the serialized form.
    std::vector<std::pair<std::string, std::string>> details;

    const std::string* detail(std::string_view key) const;

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

// Append-only record of everything a run did. seq starts at 1 and record
// times never decrease.
class EventLog {
public:
    EventRecord& append(SimTime time, EventKind kind, std::vector<std::string> subjects,
                        std::vector<std::pair<std::string, std::string>> details = {});
    void append_record(EventRecord record);  // trusts caller's seq (log replay)

    const std::vector<EventRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    std::size_t count(EventKind kind) const;

    friend bool operator==(const EventLog&, const EventLog&) = default;

private:
    std::vector<EventRecord> records_;
};

}  // namespace citybrain
