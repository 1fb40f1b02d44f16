#pragma once

#include <cstdint>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace citybrain {

// Simulated time, stored as integer nanoseconds of one unitless "time unit".
// Integer storage keeps event ordering, log formatting and replay exact:
// every value prints as <units>.<9 digits> and parses back to the same bits.
class SimTime {
public:
    constexpr SimTime() = default;

    static constexpr SimTime from_nanos(std::int64_t n) { return SimTime(n); }
    static SimTime from_units(double units);

    constexpr std::int64_t nanos() const { return nanos_; }
    double units() const { return static_cast<double>(nanos_) / 1e9; }

    // Fixed-width text form, e.g. "12.500000000". Requires a nonnegative value.
    std::string text() const;
    static std::optional<SimTime> parse(std::string_view text);

    friend constexpr auto operator<=>(SimTime, SimTime) = default;

    constexpr SimTime operator+(SimTime other) const { return SimTime(nanos_ + other.nanos_); }
    constexpr SimTime operator-(SimTime other) const { return SimTime(nanos_ - other.nanos_); }
    SimTime& operator+=(SimTime other) { nanos_ += other.nanos_; return *this; }

private:
    constexpr explicit SimTime(std::int64_t n) : nanos_(n) {}
    std::int64_t nanos_ = 0;
};

// A duration is a difference of simulated times; same representation.
using SimDuration = SimTime;

}  // namespace citybrain
