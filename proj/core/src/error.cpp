#include "fractalis/error.hpp"

namespace fractalis {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
        case ErrorCode::MalformedCsv: return "MalformedCsv";
        case ErrorCode::NonPositivePrice: return "NonPositivePrice";
        case ErrorCode::DuplicateTimestamp: return "DuplicateTimestamp";
        case ErrorCode::UpsampleRequested: return "UpsampleRequested";
        case ErrorCode::NoOverlap: return "NoOverlap";
        case ErrorCode::FrequencyMismatch: return "FrequencyMismatch";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::EvenPower: return "EvenPower";
        case ErrorCode::SingularRegression: return "SingularRegression";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::TooFewScales: return "TooFewScales";
        case ErrorCode::DegenerateFit: return "DegenerateFit";
        case ErrorCode::EmbeddingFailure: return "EmbeddingFailure";
    }
    return "Unknown";
}

}  // namespace fractalis
