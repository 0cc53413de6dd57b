#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fractalis/app/config.hpp"
#include "fractalis/hurst.hpp"
#include "fractalis/stats.hpp"

namespace fractalis::app {

/// Returns for one asset after the load/resample/filter/slice/transform chain.
struct PreparedAsset {
    std::string asset_id;
    std::optional<ReturnSeries> returns;
    std::string error;
};

struct StatsRow {
    std::string asset_id;
    std::optional<DescriptiveStats> stats;
    std::optional<TestResult> jb;
    std::string error;
    friend bool operator==(const StatsRow&, const StatsRow&) = default;
};

struct StatsTable {
    std::string frequency;
    std::string period;
    std::vector<StatsRow> rows;
    friend bool operator==(const StatsTable&, const StatsTable&) = default;
};

struct AdfRow {
    std::string asset_id;
    std::string frequency;
    std::size_t n = 0;
    std::optional<TestResult> result;
    std::string error;
    friend bool operator==(const AdfRow&, const AdfRow&) = default;
};

struct AdfTable {
    std::vector<AdfRow> rows;
    friend bool operator==(const AdfTable&, const AdfTable&) = default;
};

struct HurstRow {
    std::string asset_id;
    std::string frequency;
    std::string period;
    std::size_t n = 0;
    std::optional<HurstEstimate> estimate;
    std::optional<MemoryKind> memory;
    RsCurve curve;
    std::string error;
    friend bool operator==(const HurstRow&, const HurstRow&) = default;
};

struct HurstTable {
    double alpha = 0.001;
    std::vector<HurstRow> rows;
    friend bool operator==(const HurstTable&, const HurstTable&) = default;
};

struct RollingTable {
    std::string asset_id;
    std::string frequency;
    RollingHurst rolling;
    friend bool operator==(const RollingTable&, const RollingTable&) = default;
};

struct CorrTable {
    std::string frequency;
    std::string period;
    CorrelationMatrix matrix;
    friend bool operator==(const CorrTable&, const CorrTable&) = default;
};

[[nodiscard]] StatsTable build_stats(const std::vector<PreparedAsset>& assets, std::string frequency,
                                     std::string period);
[[nodiscard]] AdfTable build_adf(const std::vector<PreparedAsset>& assets, std::optional<int> lag);
[[nodiscard]] HurstTable build_hurst(const std::vector<PreparedAsset>& assets, const std::string& period,
                                     const PartitionPolicy& policy, double confidence, double alpha);
[[nodiscard]] RollingTable build_rolling(const ReturnSeries& returns, std::size_t window, std::size_t step,
                                         const PartitionPolicy& policy, double confidence);
[[nodiscard]] CorrTable build_corr(const std::vector<PreparedAsset>& assets, std::string frequency,
                                   std::string period);

[[nodiscard]] std::size_t failures(const StatsTable& t) noexcept;
[[nodiscard]] std::size_t failures(const AdfTable& t) noexcept;
[[nodiscard]] std::size_t failures(const HurstTable& t) noexcept;
[[nodiscard]] std::size_t failures(const CorrTable& t) noexcept;

[[nodiscard]] std::string render(const StatsTable& t, OutputFormat f);
[[nodiscard]] std::string render(const AdfTable& t, OutputFormat f);
[[nodiscard]] std::string render(const HurstTable& t, OutputFormat f);
[[nodiscard]] std::string render(const RollingTable& t, OutputFormat f);
[[nodiscard]] std::string render(const CorrTable& t, OutputFormat f);

/// Plot data behind the log-log figure: one row per curve point with the
/// fitted line and its confidence band.
[[nodiscard]] std::string render_curve_dump(const HurstTable& t);

[[nodiscard]] std::string format_h(double h);
[[nodiscard]] std::string format_p(double p);

void to_json(nlohmann::json& j, const StatsTable& t);
void from_json(const nlohmann::json& j, StatsTable& t);
void to_json(nlohmann::json& j, const AdfTable& t);
void from_json(const nlohmann::json& j, AdfTable& t);
void to_json(nlohmann::json& j, const HurstTable& t);
void from_json(const nlohmann::json& j, HurstTable& t);
void to_json(nlohmann::json& j, const RollingTable& t);
void from_json(const nlohmann::json& j, RollingTable& t);
void to_json(nlohmann::json& j, const CorrTable& t);
void from_json(const nlohmann::json& j, CorrTable& t);

}  // namespace fractalis::app
