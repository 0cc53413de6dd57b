#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fractalis/series.hpp"

namespace fractalis {

/// Mean, population standard deviation and cumulative-deviation range of one
/// block. R/S is range / std; a zero std marks a block the caller must skip.
struct SubseriesStat {
    std::size_t index = 0;
    std::size_t length = 0;
    double mean = 0.0;
    double std = 0.0;
    double range = 0.0;
    double final_cumulative = 0.0;  ///< Y_n; zero up to rounding
};

[[nodiscard]] SubseriesStat rescaled_range(std::span<const double> values, std::size_t index = 0);

/// True when a block's std is zero or indistinguishable from rounding noise.
[[nodiscard]] bool is_degenerate(const SubseriesStat& stat) noexcept;

enum class PartitionKind {
    Halving,   ///< n = N, N/2, N/4, ... (integer floor)
    Harmonic,  ///< n = floor(N/d), d = 1, 2, 3, ...
};

struct PartitionPolicy {
    PartitionKind kind = PartitionKind::Halving;
    bool include_full = true;     ///< keep the single-block point n = N
    std::size_t min_length = 7;   ///< block lengths must exceed 6

    /// Admissible block lengths for a series of length N, ascending, unique.
    [[nodiscard]] std::vector<std::size_t> block_lengths(std::size_t total) const;
};

[[nodiscard]] std::string_view to_string(PartitionKind k) noexcept;
[[nodiscard]] std::optional<PartitionKind> parse_partition_kind(std::string_view text) noexcept;

struct RsPoint {
    std::size_t n = 0;        ///< block length
    double rs = 0.0;          ///< mean R/S over contributing blocks
    std::size_t blocks = 0;   ///< contributing blocks
    std::size_t skipped = 0;  ///< zero-variance blocks left out

    friend bool operator==(const RsPoint&, const RsPoint&) = default;
};

/// R/S statistic per block length, ascending in n.
struct RsCurve {
    std::vector<RsPoint> points;

    friend bool operator==(const RsCurve&, const RsCurve&) = default;
};

/// For every admissible n, splits the first floor(N/n)*n values into
/// contiguous blocks and averages R/S over blocks with nonzero spread.
/// Throws Error{TooShort} for N < 16, Error{TooFewScales} when fewer than 4
/// block lengths survive.
[[nodiscard]] RsCurve rs_curve(std::span<const double> values, const PartitionPolicy& policy = {});
[[nodiscard]] RsCurve rs_curve(const ReturnSeries& returns, const PartitionPolicy& policy = {});

/// Slope of log(R/S)_n = log c + H log n with the t-test of H = 0.5.
struct HurstEstimate {
    double h = 0.0;
    double log_c = 0.0;             ///< natural-log intercept
    double std_err = 0.0;
    double t_stat = 0.0;            ///< (h - 0.5) / std_err, df = k - 2
    double p_value = 1.0;           ///< two-sided
    double ci_low = 0.0;
    double ci_high = 0.0;
    double confidence = 0.99;
    std::size_t k_points = 0;
    double fractal_dimension = 0.0; ///< 2 - h
    bool out_of_range = false;      ///< h outside (0, 1); reported unclamped

    // Fit summary used to draw the regression band.
    double residual_se = 0.0;
    double mean_log_n = 0.0;
    double ss_log_n = 0.0;
    double t_critical = 0.0;

    friend bool operator==(const HurstEstimate&, const HurstEstimate&) = default;
};

/// OLS fit of log(rs) on log(n). Throws Error{TooFewScales} below 4 points,
/// Error{DegenerateFit} when all n coincide, Error{InvalidArgument} for a
/// confidence outside (0, 1).
[[nodiscard]] HurstEstimate fit_hurst(const RsCurve& curve, double confidence = 0.99);

[[nodiscard]] HurstEstimate hurst(std::span<const double> values, const PartitionPolicy& policy = {},
                                  double confidence = 0.99);
[[nodiscard]] HurstEstimate hurst(const ReturnSeries& returns, const PartitionPolicy& policy = {},
                                  double confidence = 0.99);

struct FitBandPoint {
    double fit;
    double low;
    double high;
};

/// Fitted line and its confidence band (for the mean response) at log n.
[[nodiscard]] FitBandPoint fit_band(const HurstEstimate& estimate, double log_n) noexcept;

enum class MemoryKind { Efficient, AntiPersistent, Persistent };

[[nodiscard]] std::string_view to_string(MemoryKind k) noexcept;

struct MemoryClass {
    MemoryKind kind = MemoryKind::Efficient;
    double h = 0.5;
    double p_value = 1.0;
    double alpha = 0.001;
};

/// Efficient when H = 0.5 is not rejected at alpha; otherwise the sign of
/// h - 0.5 decides between persistent and anti-persistent memory.
[[nodiscard]] MemoryClass classify(double h, double p_value, double alpha) noexcept;
[[nodiscard]] MemoryClass classify(const HurstEstimate& estimate, double alpha) noexcept;

struct RollingPoint {
    Timestamp time;                         ///< timestamp of the window's last return
    std::optional<HurstEstimate> estimate;  ///< empty when the window had too few scales
    friend bool operator==(const RollingPoint&, const RollingPoint&) = default;
};

struct RollingHurst {
    std::size_t window = 150;
    std::size_t step = 1;
    std::vector<RollingPoint> points;
    friend bool operator==(const RollingHurst&, const RollingHurst&) = default;
};

/// Hurst over every window of `window` consecutive returns advancing by
/// `step`: floor((N - window) / step) + 1 entries. Windows run in parallel.
/// Throws Error{TooShort} when N < window, Error{InvalidArgument} when
/// window < 32 or step == 0.
[[nodiscard]] RollingHurst rolling_hurst(const ReturnSeries& returns, std::size_t window = 150, std::size_t step = 1,
                                         const PartitionPolicy& policy = {}, double confidence = 0.99);

}  // namespace fractalis
