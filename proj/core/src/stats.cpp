#include "fractalis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "fractalis/error.hpp"
#include "fractalis/ingest.hpp"
#include "fractalis/parallel.hpp"

namespace fractalis {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mean_of(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

// Spread indistinguishable from rounding noise around the mean.
bool negligible_spread(double sum_sq_dev, std::size_t n, double mean) {
    const double spread = std::sqrt(sum_sq_dev / static_cast<double>(n));
    return spread <= 8.0 * std::numeric_limits<double>::epsilon() * std::abs(mean);
}

}  // namespace

Stars stars_for(double p_value) noexcept {
    if (p_value < 0.001) return Stars::S01;
    if (p_value < 0.01) return Stars::S1;
    if (p_value < 0.05) return Stars::S5;
    return Stars::None;
}

std::string_view to_string(Stars s) noexcept {
    switch (s) {
        case Stars::S01: return "***";
        case Stars::S1: return "**";
        case Stars::S5: return "*";
        case Stars::None: return "";
    }
    return "";
}

DescriptiveStats describe(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw Error(ErrorCode::TooShort, "descriptive statistics need at least 2 values");

    DescriptiveStats out;
    out.n = n;
    out.mean = mean_of(values);

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    out.min = sorted.front();
    out.max = sorted.back();
    out.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (double x : values) {
        const double d = x - out.mean;
        const double d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    const double dn = static_cast<double>(n);
    out.std = std::sqrt(s2 / (dn - 1.0));
    if (s2 > 0.0) {
        // Same as m3 / m2^{3/2} and m4 / m2^2 with population moments, but in
        // terms of raw sums so symmetric integer samples give exact results.
        out.skewness = std::sqrt(dn) * s3 / (s2 * std::sqrt(s2));
        out.kurtosis = dn * s4 / (s2 * s2);
    } else {
        out.skewness = std::numeric_limits<double>::quiet_NaN();
        out.kurtosis = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

DescriptiveStats describe(const ReturnSeries& returns) { return describe(returns.values()); }

TestResult jarque_bera(std::span<const double> values) {
    if (values.size() < 8) throw Error(ErrorCode::TooShort, "Jarque-Bera needs at least 8 values");
    const auto d = describe(values);
    if (std::isnan(d.kurtosis)) throw Error(ErrorCode::ZeroVariance, "Jarque-Bera on a constant sample");
    const double excess = d.kurtosis - 3.0;
    TestResult out;
    out.statistic = static_cast<double>(d.n) / 6.0 * (d.skewness * d.skewness + excess * excess / 4.0);
    // Chi-square with 2 degrees of freedom has survival function exp(-x/2).
    out.p_value = std::exp(-out.statistic / 2.0);
    out.stars = stars_for(out.p_value);
    out.df_or_lag = 2;
    return out;
}

TestResult jarque_bera(const ReturnSeries& returns) { return jarque_bera(returns.values()); }

Correlation pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw Error(ErrorCode::LengthMismatch,
                    "pearson inputs have lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
    const std::size_t n = a.size();
    if (n < 3) throw Error(ErrorCode::TooShort, "pearson needs at least 3 pairs");

    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0 || negligible_spread(saa, n, ma) || negligible_spread(sbb, n, mb))
        throw Error(ErrorCode::ZeroVariance, "pearson input has zero variance");

    Correlation out;
    out.r = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
    const int df = static_cast<int>(n) - 2;
    out.test.df_or_lag = df;
    if (std::abs(out.r) == 1.0) {
        out.test.statistic = std::copysign(kInf, out.r);
        out.test.p_value = 0.0;
    } else {
        out.test.statistic = out.r * std::sqrt(static_cast<double>(df) / (1.0 - out.r * out.r));
        const boost::math::students_t dist(static_cast<double>(df));
        out.test.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(out.test.statistic))));
    }
    out.test.stars = stars_for(out.test.p_value);
    return out;
}

Correlation pearson(const ReturnSeries& a, const ReturnSeries& b) { return pearson(a.values(), b.values()); }

CorrelationMatrix correlation_matrix(const std::vector<ReturnSeries>& series) {
    if (series.size() < 2) throw Error(ErrorCode::InvalidArgument, "correlation matrix needs at least 2 series");
    const std::size_t k = series.size();

    CorrelationMatrix out;
    out.cells.resize(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        out.asset_ids.push_back(series[i].asset_id);
        auto& diag = out.cells[i * k + i];
        diag.n = series[i].size();
        diag.value = Correlation{1.0, TestResult{kInf, 0.0, Stars::S01, static_cast<int>(diag.n) - 2}};
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) pairs.emplace_back(i, j);

    parallel_for(pairs.size(), [&](std::size_t p) {
        const auto [i, j] = pairs[p];
        CorrelationCell cell;
        try {
            const auto [a, b] = align(series[i], series[j]);
            cell.n = a.size();
            cell.value = pearson(a, b);
        } catch (const Error& e) {
            cell.value.reset();
            cell.error = e.what();
        }
        out.cells[i * k + j] = cell;
        out.cells[j * k + i] = cell;
    });
    return out;
}

}  // namespace fractalis
