#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace citybrain {

enum class Errc {
    DuplicateId,
    UnknownNeuron,
    SelfLoop,
    EmptyGraph,
    AllCensusZero,
    MixedKinds,
    InvalidArc,
    ClockRegression,
    InvalidScenario,
    UnknownTarget,
    BadWindow,
    DuplicateCategory,
    ProtectedCategory,
    InvalidParams,
    IoError,
    CorruptRecord,
    SchemaVersionUnsupported,
};

std::string_view errc_name(Errc code);

class SimError : public std::runtime_error {
public:
    SimError(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

}  // namespace citybrain
