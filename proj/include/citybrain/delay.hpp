#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "citybrain/time.hpp"

namespace citybrain {

enum class DelayKind { Constant, Uniform, Exponential };

std::string_view to_string(DelayKind kind);

// Nonnegative delay distribution. `a` is the constant value, the lower bound,
// or the mean depending on kind; `b` is the Uniform upper bound.
struct DelayModel {
    DelayKind kind = DelayKind::Constant;
    double a = 0.0;
    double b = 0.0;

    static DelayModel constant(double value) { return {DelayKind::Constant, value, 0.0}; }
    static DelayModel uniform(double lo, double hi) { return {DelayKind::Uniform, lo, hi}; }
    static DelayModel exponential(double mean) { return {DelayKind::Exponential, mean, 0.0}; }

    bool valid() const;
    double mean() const;
    double variance() const;

    friend bool operator==(const DelayModel&, const DelayModel&) = default;
};

// One named, independently seeded random stream. Draw transforms are written
// out explicitly so sequences are identical across standard libraries.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform01();  // [0, 1)

private:
    std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Stream seed derived from the run's root seed and the stream name, so adding
// a stream never shifts another stream's draws.
std::uint64_t derive_stream_seed(std::uint64_t root_seed, std::string_view stream_name);

SimDuration sample_delay(const DelayModel& model, RngStream& rng);

}  // namespace citybrain
