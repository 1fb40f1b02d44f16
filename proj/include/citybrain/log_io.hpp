#pragma once

#include <string>
#include <string_view>

#include "citybrain/event_log.hpp"

namespace citybrain {

// Line-delimited log form: one record per line, tab-separated fields in fixed
// order (seq, time, kind, subjects, details), UTF-8, times with 9 decimals.
std::string serialize_log(const EventLog& log);

// Strict inverse of serialize_log. Throws CorruptRecord with the offending
// line number, or IoError.
EventLog parse_log(std::string_view text);

void write_log(const EventLog& log, const std::string& path);
EventLog read_log(const std::string& path);

// Content hash of the serialized log, e.g. "fnv1a64:9c5a...".
std::string log_digest(const EventLog& log);

}  // namespace citybrain
