#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fractalis/series.hpp"

namespace fractalis {

struct DescriptiveStats {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double std = 0.0;       ///< sample standard deviation, divisor n - 1
    double max = 0.0;
    double min = 0.0;
    double skewness = 0.0;  ///< m3 / m2^{3/2}, population moments
    double kurtosis = 0.0;  ///< m4 / m2^2, non-excess (normal = 3)

    friend bool operator==(const DescriptiveStats&, const DescriptiveStats&) = default;
};

/// Significance stars: *** p < 0.001, ** p < 0.01, * p < 0.05.
enum class Stars { None, S5, S1, S01 };

[[nodiscard]] Stars stars_for(double p_value) noexcept;
[[nodiscard]] std::string_view to_string(Stars s) noexcept;

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    Stars stars = Stars::None;
    int df_or_lag = 0;

    friend bool operator==(const TestResult&, const TestResult&) = default;
};

/// Throws Error{TooShort} for fewer than 2 values.
[[nodiscard]] DescriptiveStats describe(std::span<const double> values);
[[nodiscard]] DescriptiveStats describe(const ReturnSeries& returns);

/// JB = n/6 (S^2 + (K-3)^2/4), p from the chi-square(2) upper tail. n >= 8.
[[nodiscard]] TestResult jarque_bera(std::span<const double> values);
[[nodiscard]] TestResult jarque_bera(const ReturnSeries& returns);

// --- Augmented Dickey-Fuller -------------------------------------------------

enum class AdfRegression { Constant, ConstantTrend };

/// floor((n - 1)^{1/3}); n >= 10.
[[nodiscard]] int default_adf_lag(std::size_t n);

/// Tests the unit-root null on `values` with
///   dy_t = a [+ b t] + g y_{t-1} + sum_{i=1..lag} c_i dy_{t-i} + e_t.
/// The statistic is g / se(g); the p-value comes from MacKinnon's (1994)
/// response-surface approximation. df_or_lag holds the lag used.
/// Throws Error{TooShort} when n < lag + 10, Error{SingularRegression} on a
/// rank-deficient design.
[[nodiscard]] TestResult adf_test(std::span<const double> values, std::optional<int> lag = std::nullopt,
                                  AdfRegression regression = AdfRegression::Constant);
[[nodiscard]] TestResult adf_test(const ReturnSeries& returns, std::optional<int> lag = std::nullopt,
                                  AdfRegression regression = AdfRegression::Constant);

/// MacKinnon's approximate p-value for an ADF t-statistic (one I(1) series).
[[nodiscard]] double adf_p_value(double statistic, AdfRegression regression = AdfRegression::Constant);

struct AdfCriticalValues {
    double pct1;
    double pct5;
    double pct10;
};

/// Finite-sample critical values from MacKinnon (2010) for `nobs` regression rows.
[[nodiscard]] AdfCriticalValues adf_critical_values(std::size_t nobs,
                                                    AdfRegression regression = AdfRegression::Constant);

// --- Correlation -------------------------------------------------------------

struct Correlation {
    double r = 0.0;
    TestResult test;  ///< t = r sqrt((n-2)/(1-r^2)), two-sided, df = n - 2

    friend bool operator==(const Correlation&, const Correlation&) = default;
};

/// Throws Error{LengthMismatch}, Error{TooShort} (n < 3), Error{ZeroVariance}.
/// |r| = 1 reports an infinite statistic and p = 0.
[[nodiscard]] Correlation pearson(std::span<const double> a, std::span<const double> b);
[[nodiscard]] Correlation pearson(const ReturnSeries& a, const ReturnSeries& b);

struct CorrelationCell {
    std::optional<Correlation> value;  ///< empty when the pair failed
    std::string error;                 ///< reason for a failed pair
    std::size_t n = 0;                 ///< aligned sample size

    friend bool operator==(const CorrelationCell&, const CorrelationCell&) = default;
};

/// Symmetric, row-major, unit diagonal.
struct CorrelationMatrix {
    std::vector<std::string> asset_ids;
    std::vector<CorrelationCell> cells;

    [[nodiscard]] std::size_t dim() const noexcept { return asset_ids.size(); }
    [[nodiscard]] const CorrelationCell& at(std::size_t i, std::size_t j) const { return cells.at(i * dim() + j); }

    friend bool operator==(const CorrelationMatrix&, const CorrelationMatrix&) = default;
};

/// Pearson on align(series_i, series_j) for every pair; failed pairs are
/// recorded in the cell instead of aborting the matrix. Pairs run in parallel.
[[nodiscard]] CorrelationMatrix correlation_matrix(const std::vector<ReturnSeries>& series);

}  // namespace fractalis
