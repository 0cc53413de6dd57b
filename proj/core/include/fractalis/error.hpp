#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fractalis {

enum class ErrorCode {
    InvalidArgument,
    Io,
    MalformedCsv,
    NonPositivePrice,
    DuplicateTimestamp,
    UpsampleRequested,
    NoOverlap,
    FrequencyMismatch,
    TooShort,
    EvenPower,
    SingularRegression,
    LengthMismatch,
    ZeroVariance,
    TooFewScales,
    DegenerateFit,
    EmbeddingFailure,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's per-asset error rows) can branch without parsing text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fractalis
