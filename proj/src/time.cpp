#include "citybrain/time.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace citybrain {

namespace {
constexpr std::int64_t kNanosPerUnit = 1'000'000'000;
}

SimTime SimTime::from_units(double units) {
    return SimTime::from_nanos(std::llround(units * 1e9));
}

std::string SimTime::text() const {
    char buf[40];
    const std::int64_t whole = nanos_ / kNanosPerUnit;
    const std::int64_t frac = nanos_ % kNanosPerUnit;
    std::snprintf(buf, sizeof(buf), "%lld.%09lld", static_cast<long long>(whole),
                  static_cast<long long>(frac));
    return buf;
}

std::optional<SimTime> SimTime::parse(std::string_view text) {
    const auto dot = text.find('.');
    if (dot == std::string_view::npos || dot == 0) return std::nullopt;
    const std::string_view whole_part = text.substr(0, dot);
    const std::string_view frac_part = text.substr(dot + 1);
    if (frac_part.size() != 9) return std::nullopt;

    std::int64_t whole = 0;
    for (char c : whole_part) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        whole = whole * 10 + (c - '0');
    }
    std::int64_t frac = 0;
    for (char c : frac_part) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        frac = frac * 10 + (c - '0');
    }
    return SimTime::from_nanos(whole * kNanosPerUnit + frac);
}

}  // namespace citybrain
