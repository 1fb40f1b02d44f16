#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "citybrain/city_iq.hpp"

namespace citybrain {

struct ReportBundle {
    CityIqReport report;
    std::string run_digest;
    std::string scenario_name;
    std::optional<std::uint64_t> seed;  // absent when scored from an external log

    friend bool operator==(const ReportBundle&, const ReportBundle&) = default;
};

// Human-readable three-level table ending with the "City IQ: <score>" line.
std::string emit_report_table(const ReportBundle& bundle);

// Machine-readable JSON form; round-trips through parse_report_structured.
std::string emit_report_structured(const ReportBundle& bundle);
ReportBundle parse_report_structured(std::string_view text);  // throws CorruptRecord

}  // namespace citybrain
