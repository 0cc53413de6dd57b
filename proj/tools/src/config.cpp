#include "fractalis/app/config.hpp"

#include <filesystem>

#include "fractalis/error.hpp"

namespace fractalis::app {

std::string_view to_string(OutputFormat f) noexcept {
    switch (f) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Markdown: return "md";
        case OutputFormat::Json: return "json";
    }
    return "md";
}

std::optional<OutputFormat> parse_output_format(std::string_view text) noexcept {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "md" || text == "markdown") return OutputFormat::Markdown;
    if (text == "json") return OutputFormat::Json;
    return std::nullopt;
}

std::string_view extension(OutputFormat f) noexcept { return to_string(f); }

InputBinding parse_binding(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
        if (text.empty()) throw Error(ErrorCode::InvalidArgument, "empty input binding");
        return {std::filesystem::path(text).stem().string(), std::string(text)};
    }
    InputBinding b{std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
    if (b.asset_id.empty() || b.path.empty())
        throw Error(ErrorCode::InvalidArgument, "input binding must look like asset=path, got '" + std::string(text) + "'");
    return b;
}

std::optional<PeriodSpec> RunConfig::period() const {
    if (!from && !to) return std::nullopt;
    return PeriodSpec(from.value_or(Timestamp::min()), to.value_or(Timestamp::max()));
}

void validate(const RunConfig& c) {
    const auto bad = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
    if (c.power) {
        if (*c.power < 1) bad("--power must be a positive odd integer");
        if (*c.power % 2 == 0) throw Error(ErrorCode::EvenPower, "--power must be odd, got " + std::to_string(*c.power));
    }
    if (!(c.confidence > 0.0 && c.confidence < 1.0)) bad("--confidence must lie in (0, 1)");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) bad("--alpha must lie in (0, 1)");
    if (c.step == 0) bad("--step must be positive");
    if (c.lag && *c.lag < 0) bad("--lag must be non-negative");
    if (c.from && c.to && !(*c.from < *c.to)) bad("--from must precede --to");
    if (c.split) {
        if (c.from && !(*c.from < *c.split)) bad("--split must follow --from");
        if (c.to && !(*c.split < *c.to)) bad("--split must precede --to");
    }
    for (std::size_t i = 0; i < c.inputs.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (c.inputs[i].asset_id == c.inputs[j].asset_id) bad("duplicate asset id '" + c.inputs[i].asset_id + "'");
}

}  // namespace fractalis::app
