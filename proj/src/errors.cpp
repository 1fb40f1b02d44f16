#include "citybrain/errors.hpp"

namespace citybrain {

std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::DuplicateId: return "DuplicateId";
        case Errc::UnknownNeuron: return "UnknownNeuron";
        case Errc::SelfLoop: return "SelfLoop";
        case Errc::EmptyGraph: return "EmptyGraph";
        case Errc::AllCensusZero: return "AllCensusZero";
        case Errc::MixedKinds: return "MixedKinds";
        case Errc::InvalidArc: return "InvalidArc";
        case Errc::ClockRegression: return "ClockRegression";
        case Errc::InvalidScenario: return "InvalidScenario";
        case Errc::UnknownTarget: return "UnknownTarget";
        case Errc::BadWindow: return "BadWindow";
        case Errc::DuplicateCategory: return "DuplicateCategory";
        case Errc::ProtectedCategory: return "ProtectedCategory";
        case Errc::InvalidParams: return "InvalidParams";
        case Errc::IoError: return "IoError";
        case Errc::CorruptRecord: return "CorruptRecord";
        case Errc::SchemaVersionUnsupported: return "SchemaVersionUnsupported";
    }
    return "UnknownError";
}

}  // namespace citybrain
