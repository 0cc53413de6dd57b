#include "fractalis/hurst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "fractalis/error.hpp"
#include "fractalis/parallel.hpp"

namespace fractalis {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Residual scatter this small (relative to |log rs|) is rounding noise from
// an exact power law, not sampling error.
constexpr double kExactFitTolerance = 1024.0 * kEps;

}  // namespace

SubseriesStat rescaled_range(std::span<const double> values, std::size_t index) {
    SubseriesStat out;
    out.index = index;
    out.length = values.size();
    if (values.empty()) return out;

    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());

    double cumulative = 0.0;
    double lo = 0.0, hi = 0.0, ss = 0.0;
    bool first = true;
    for (double v : values) {
        const double z = v - out.mean;
        ss += z * z;
        cumulative += z;
        if (first) {
            lo = hi = cumulative;
            first = false;
        } else {
            lo = std::min(lo, cumulative);
            hi = std::max(hi, cumulative);
        }
    }
    out.range = hi - lo;
    out.std = std::sqrt(ss / static_cast<double>(values.size()));
    out.final_cumulative = cumulative;
    return out;
}

bool is_degenerate(const SubseriesStat& stat) noexcept {
    return !(stat.std > 8.0 * kEps * std::abs(stat.mean));
}

std::vector<std::size_t> PartitionPolicy::block_lengths(std::size_t total) const {
    const std::size_t floor_len = std::max<std::size_t>(min_length, 2);
    std::vector<std::size_t> lengths;
    if (kind == PartitionKind::Halving) {
        for (std::size_t n = total; n >= floor_len; n /= 2) lengths.push_back(n);
    } else {
        for (std::size_t d = 1; total / d >= floor_len; ++d) lengths.push_back(total / d);
    }
    if (!include_full) std::erase(lengths, total);
    std::sort(lengths.begin(), lengths.end());
    lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
    return lengths;
}

std::string_view to_string(PartitionKind k) noexcept {
    return k == PartitionKind::Halving ? "halving" : "harmonic";
}

std::optional<PartitionKind> parse_partition_kind(std::string_view text) noexcept {
    if (text == "halving") return PartitionKind::Halving;
    if (text == "harmonic") return PartitionKind::Harmonic;
    return std::nullopt;
}

RsCurve rs_curve(std::span<const double> values, const PartitionPolicy& policy) {
    const std::size_t total = values.size();
    if (total < 16) throw Error(ErrorCode::TooShort, "R/S analysis needs at least 16 values, got " + std::to_string(total));

    RsCurve curve;
    for (const std::size_t n : policy.block_lengths(total)) {
        const std::size_t d = total / n;
        RsPoint point{n, 0.0, 0, 0};
        double sum = 0.0;
        for (std::size_t m = 0; m < d; ++m) {
            const auto stat = rescaled_range(values.subspan(m * n, n), m);
            if (is_degenerate(stat)) {
                ++point.skipped;
                continue;
            }
            sum += stat.range / stat.std;
            ++point.blocks;
        }
        if (point.blocks == 0) continue;
        point.rs = sum / static_cast<double>(point.blocks);
        curve.points.push_back(point);
    }
    if (curve.points.size() < 4)
        throw Error(ErrorCode::TooFewScales,
                    "only " + std::to_string(curve.points.size()) + " block lengths with nonzero spread, need 4");
    return curve;
}

RsCurve rs_curve(const ReturnSeries& returns, const PartitionPolicy& policy) {
    return rs_curve(returns.values(), policy);
}

HurstEstimate fit_hurst(const RsCurve& curve, double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw Error(ErrorCode::InvalidArgument, "confidence must lie in (0, 1)");
    const std::size_t k = curve.points.size();
    if (k < 4) throw Error(ErrorCode::TooFewScales, "fit needs at least 4 curve points, got " + std::to_string(k));

    std::vector<double> x(k), y(k);
    double y_scale = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& p = curve.points[i];
        if (!(p.rs > 0.0) || p.n == 0) throw Error(ErrorCode::InvalidArgument, "curve points need n > 0 and rs > 0");
        x[i] = std::log(static_cast<double>(p.n));
        y[i] = std::log(p.rs);
        y_scale = std::max(y_scale, std::abs(y[i]));
    }
    const double dk = static_cast<double>(k);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= dk;
    my /= dk;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw Error(ErrorCode::DegenerateFit, "all curve points share one block length");

    HurstEstimate est;
    est.k_points = k;
    est.confidence = confidence;
    est.h = sxy / sxx;
    est.log_c = my - est.h * mx;
    est.fractal_dimension = 2.0 - est.h;
    est.out_of_range = !(est.h > 0.0 && est.h < 1.0);
    est.mean_log_n = mx;
    est.ss_log_n = sxx;

    double ssr = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double e = y[i] - est.log_c - est.h * x[i];
        ssr += e * e;
    }
    const double dof = dk - 2.0;
    est.residual_se = std::sqrt(ssr / dof);
    const boost::math::students_t dist(dof);
    est.t_critical = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));

    if (est.residual_se <= kExactFitTolerance * y_scale) {
        est.residual_se = 0.0;
        est.std_err = 0.0;
        const double diff = est.h - 0.5;
        if (std::abs(diff) <= kExactFitTolerance) {
            est.t_stat = 0.0;
            est.p_value = 1.0;
        } else {
            est.t_stat = std::copysign(std::numeric_limits<double>::infinity(), diff);
            est.p_value = 0.0;
        }
    } else {
        est.std_err = est.residual_se / std::sqrt(sxx);
        est.t_stat = (est.h - 0.5) / est.std_err;
        est.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(est.t_stat))));
    }
    est.ci_low = est.h - est.t_critical * est.std_err;
    est.ci_high = est.h + est.t_critical * est.std_err;
    return est;
}

HurstEstimate hurst(std::span<const double> values, const PartitionPolicy& policy, double confidence) {
    return fit_hurst(rs_curve(values, policy), confidence);
}

HurstEstimate hurst(const ReturnSeries& returns, const PartitionPolicy& policy, double confidence) {
    return hurst(returns.values(), policy, confidence);
}

FitBandPoint fit_band(const HurstEstimate& e, double log_n) noexcept {
    const double fit = e.log_c + e.h * log_n;
    const double k = static_cast<double>(e.k_points);
    const double dx = log_n - e.mean_log_n;
    const double half = e.t_critical * e.residual_se * std::sqrt(1.0 / k + dx * dx / e.ss_log_n);
    return {fit, fit - half, fit + half};
}

std::string_view to_string(MemoryKind k) noexcept {
    switch (k) {
        case MemoryKind::Efficient: return "efficient";
        case MemoryKind::AntiPersistent: return "anti-persistent";
        case MemoryKind::Persistent: return "persistent";
    }
    return "?";
}

MemoryClass classify(double h, double p_value, double alpha) noexcept {
    MemoryClass out{MemoryKind::Efficient, h, p_value, alpha};
    if (p_value < alpha) {
        if (h > 0.5) out.kind = MemoryKind::Persistent;
        else if (h < 0.5) out.kind = MemoryKind::AntiPersistent;
    }
    return out;
}

MemoryClass classify(const HurstEstimate& estimate, double alpha) noexcept {
    return classify(estimate.h, estimate.p_value, alpha);
}

RollingHurst rolling_hurst(const ReturnSeries& returns, std::size_t window, std::size_t step,
                           const PartitionPolicy& policy, double confidence) {
    if (window < 32) throw Error(ErrorCode::InvalidArgument, "rolling window must be at least 32");
    if (step == 0) throw Error(ErrorCode::InvalidArgument, "rolling step must be positive");
    const std::size_t total = returns.size();
    if (total < window)
        throw Error(ErrorCode::TooShort, returns.asset_id + ": " + std::to_string(total) +
                                             " returns is shorter than the window of " + std::to_string(window));

    const auto values = returns.values();
    RollingHurst out;
    out.window = window;
    out.step = step;
    out.points.resize((total - window) / step + 1);
    parallel_for(out.points.size(), [&](std::size_t i) {
        const std::size_t start = i * step;
        auto& point = out.points[i];
        point.time = returns.points[start + window - 1].time;
        try {
            point.estimate = hurst(std::span<const double>(values).subspan(start, window), policy, confidence);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::TooFewScales) throw;
            point.estimate.reset();
        }
    });
    return out;
}

}  // namespace fractalis
