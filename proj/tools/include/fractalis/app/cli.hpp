#pragma once

#include <ostream>
#include <vector>

#include "fractalis/app/config.hpp"
#include "fractalis/app/tables.hpp"

namespace fractalis::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct LoadedAsset {
    std::string asset_id;
    std::optional<PriceSeries> prices;
    std::string error;
};

[[nodiscard]] std::vector<LoadedAsset> load_inputs(const RunConfig& config);

/// Runs loaded prices through resample, weekday filter, period slice, log
/// returns and the optional power transform. Failures stay per asset.
[[nodiscard]] std::vector<PreparedAsset> prepare(const std::vector<LoadedAsset>& loaded, const RunConfig& config,
                                                 std::optional<Frequency> frequency,
                                                 const std::optional<PeriodSpec>& period);

[[nodiscard]] std::string period_label(const std::optional<PeriodSpec>& period);

int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_adf(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_hurst(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_rolling(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_corr(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fractalis::app
