#include "citybrain/delay.hpp"

#include <cmath>

namespace citybrain {

std::string_view to_string(DelayKind kind) {
    switch (kind) {
        case DelayKind::Constant: return "Constant";
        case DelayKind::Uniform: return "Uniform";
        case DelayKind::Exponential: return "Exponential";
    }
    return "?";
}

bool DelayModel::valid() const {
    switch (kind) {
        case DelayKind::Constant: return std::isfinite(a) && a >= 0.0;
        case DelayKind::Uniform: return std::isfinite(a) && std::isfinite(b) && a >= 0.0 && a <= b;
        case DelayKind::Exponential: return std::isfinite(a) && a >= 0.0;
    }
    return false;
}

double DelayModel::mean() const {
    switch (kind) {
        case DelayKind::Constant: return a;
        case DelayKind::Uniform: return (a + b) / 2.0;
        case DelayKind::Exponential: return a;
    }
    return 0.0;
}

double DelayModel::variance() const {
    switch (kind) {
        case DelayKind::Constant: return 0.0;
        case DelayKind::Uniform: return (b - a) * (b - a) / 12.0;
        case DelayKind::Exponential: return a * a;
    }
    return 0.0;
}

double RngStream::uniform01() {
    // 53-bit mantissa draw; identical on every conforming mt19937_64.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t root_seed, std::string_view stream_name) {
    return splitmix64(root_seed ^ fnv1a64(stream_name));
}

SimDuration sample_delay(const DelayModel& model, RngStream& rng) {
    switch (model.kind) {
        case DelayKind::Constant:
            return SimTime::from_units(model.a);
        case DelayKind::Uniform: {
            const double u = rng.uniform01();
            return SimTime::from_units(model.a + u * (model.b - model.a));
        }
        case DelayKind::Exponential: {
            const double u = rng.uniform01();  // u < 1, so log1p(-u) is finite
            return SimTime::from_units(-model.a * std::log1p(-u));
        }
    }
    return SimTime{};
}

}  // namespace citybrain
