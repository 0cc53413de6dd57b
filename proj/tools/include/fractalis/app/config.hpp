#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fractalis/hurst.hpp"
#include "fractalis/ingest.hpp"
#include "fractalis/series.hpp"
#include "fractalis/synth.hpp"

namespace fractalis::app {

inline constexpr std::string_view kVersion = "0.1.0";

enum class OutputFormat { Csv, Markdown, Json };

[[nodiscard]] std::string_view to_string(OutputFormat f) noexcept;
[[nodiscard]] std::optional<OutputFormat> parse_output_format(std::string_view text) noexcept;
[[nodiscard]] std::string_view extension(OutputFormat f) noexcept;

struct InputBinding {
    std::string asset_id;
    std::string path;
    friend bool operator==(const InputBinding&, const InputBinding&) = default;
};

/// Parses "asset=path". A bare path uses the file stem as the asset id.
[[nodiscard]] InputBinding parse_binding(std::string_view text);

struct SynthOptions {
    SynthKind kind = SynthKind::WhiteNoise;
    std::size_t n = 1024;
    double hurst = 0.5;
    double sigma = 1.0;
    double p0 = 100.0;
    std::string asset_id = "SYNTH";
    std::string out;  ///< empty writes to stdout
};

struct RunConfig {
    std::string command;
    std::vector<InputBinding> inputs;
    std::vector<Frequency> frequencies;  ///< empty means each input's native frequency
    std::optional<Timestamp> from;
    std::optional<Timestamp> to;         ///< exclusive bound
    std::optional<Timestamp> split;      ///< report: adds [from, split) and [split, to)
    bool weekdays_only = false;
    std::optional<int> power;
    ReturnScale scale = ReturnScale::Percent;
    PartitionPolicy policy;
    double confidence = 0.99;
    double alpha = 0.001;
    std::size_t window = 150;
    std::size_t step = 1;
    std::optional<int> lag;
    std::optional<OutputFormat> format;
    std::uint64_t seed = 1;
    std::string dump_curve;
    std::string out;
    SynthOptions synth;

    [[nodiscard]] OutputFormat format_or(OutputFormat fallback) const noexcept { return format.value_or(fallback); }
    [[nodiscard]] std::optional<PeriodSpec> period() const;
};

/// Throws fractalis::Error(InvalidArgument) on inconsistent settings.
void validate(const RunConfig& config);

}  // namespace fractalis::app
