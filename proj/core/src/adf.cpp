#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include "fractalis/error.hpp"
#include "fractalis/stats.hpp"

namespace fractalis {

namespace {

// MacKinnon (1994), "Approximate Asymptotic Distribution Functions for
// Unit-Root and Cointegration Tests", JBES 12(2), Table 3, one I(1) variable.
// p = Phi(poly(tau)) with the small-p polynomial below tau_star and the
// large-p cubic above it; outside [tau_min, tau_max] p is 0 or 1.
struct ResponseSurface {
    double tau_min;
    double tau_star;
    double tau_max;
    std::array<double, 3> small_p;
    std::array<double, 4> large_p;
};

constexpr ResponseSurface kConstant{
    -18.83, -1.61, 2.74, {2.1659, 1.4412, 3.8269e-2}, {1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2}};
constexpr ResponseSurface kConstantTrend{
    -16.18, -2.89, 0.70, {3.2512, 1.6047, 4.9588e-2}, {2.5261, 6.1654e-1, -3.7956e-1, -6.0285e-2}};

// MacKinnon (2010), "Critical Values for Cointegration Tests", Queen's
// Economics Department Working Paper 1227, Table 2: cv = b0 + b1/T + b2/T^2 + b3/T^3.
using CriticalSurface = std::array<std::array<double, 4>, 3>;
constexpr CriticalSurface kConstantCrit{{
    {-3.43035, -6.5393, -16.786, -79.433},
    {-2.86154, -2.8903, -4.234, -40.040},
    {-2.56677, -1.5384, -2.809, 0.0},
}};
constexpr CriticalSurface kConstantTrendCrit{{
    {-3.95877, -9.0531, -28.428, -134.155},
    {-3.41049, -4.3904, -9.036, -45.374},
    {-3.12705, -2.5856, -3.925, -22.380},
}};

const ResponseSurface& surface(AdfRegression r) {
    return r == AdfRegression::Constant ? kConstant : kConstantTrend;
}

}  // namespace

int default_adf_lag(std::size_t n) {
    if (n < 10) throw Error(ErrorCode::TooShort, "ADF needs at least 10 observations");
    const auto m = static_cast<long long>(n - 1);
    auto lag = static_cast<long long>(std::cbrt(static_cast<double>(m)));
    while ((lag + 1) * (lag + 1) * (lag + 1) <= m) ++lag;
    while (lag > 0 && lag * lag * lag > m) --lag;
    return static_cast<int>(lag);
}

double adf_p_value(double statistic, AdfRegression regression) {
    const auto& s = surface(regression);
    if (statistic > s.tau_max) return 1.0;
    if (statistic < s.tau_min) return 0.0;
    double z = 0.0;
    if (statistic <= s.tau_star) {
        z = s.small_p[0] + statistic * (s.small_p[1] + statistic * s.small_p[2]);
    } else {
        z = s.large_p[0] + statistic * (s.large_p[1] + statistic * (s.large_p[2] + statistic * s.large_p[3]));
    }
    return boost::math::cdf(boost::math::normal{}, z);
}

AdfCriticalValues adf_critical_values(std::size_t nobs, AdfRegression regression) {
    const auto& table = regression == AdfRegression::Constant ? kConstantCrit : kConstantTrendCrit;
    const double inv = 1.0 / static_cast<double>(nobs);
    auto eval = [inv](const std::array<double, 4>& b) { return b[0] + inv * (b[1] + inv * (b[2] + inv * b[3])); };
    return {eval(table[0]), eval(table[1]), eval(table[2])};
}

TestResult adf_test(std::span<const double> values, std::optional<int> lag, AdfRegression regression) {
    const std::size_t n = values.size();
    const int p = lag ? *lag : default_adf_lag(n);
    if (p < 0) throw Error(ErrorCode::InvalidArgument, "ADF lag must be non-negative");
    if (n < static_cast<std::size_t>(p) + 10)
        throw Error(ErrorCode::TooShort,
                    "ADF with lag " + std::to_string(p) + " needs at least " + std::to_string(p + 10) + " observations");

    // Rows t = p+1 .. n-1 (0-based levels): response dy_t = y_t - y_{t-1}.
    const auto rows = static_cast<Eigen::Index>(n - 1 - static_cast<std::size_t>(p));
    const Eigen::Index cols = 2 + p + (regression == AdfRegression::ConstantTrend ? 1 : 0);
    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd y(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = static_cast<std::size_t>(r) + static_cast<std::size_t>(p) + 1;
        y(r) = values[t] - values[t - 1];
        x(r, 0) = values[t - 1];
        for (int i = 1; i <= p; ++i) x(r, i) = values[t - i] - values[t - i - 1];
        x(r, p + 1) = 1.0;
        if (regression == AdfRegression::ConstantTrend) x(r, p + 2) = static_cast<double>(r + 1);
    }

    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < cols) throw Error(ErrorCode::SingularRegression, "ADF design matrix is rank deficient");
    const Eigen::VectorXd beta = qr.solve(y);
    const Eigen::VectorXd resid = y - x * beta;
    const double dof = static_cast<double>(rows - cols);
    if (dof <= 0.0) throw Error(ErrorCode::TooShort, "ADF regression has no residual degrees of freedom");
    const double sigma2 = resid.squaredNorm() / dof;

    // (X'X)^{-1} = P R^{-1} R^{-T} P^T; the variance of coefficient 0 is the
    // squared norm of the row of R^{-1} at its pivoted position.
    const Eigen::MatrixXd r_upper = qr.matrixR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r_upper.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(cols, cols));
    Eigen::Index pos = 0;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = 0; j < cols; ++j)
        if (perm(j) == 0) pos = j;
    const double se = std::sqrt(sigma2 * r_inv.row(pos).squaredNorm());
    if (!(se > 0.0) || !std::isfinite(se)) throw Error(ErrorCode::SingularRegression, "ADF standard error is degenerate");

    TestResult out;
    out.statistic = beta(0) / se;
    out.p_value = adf_p_value(out.statistic, regression);
    out.stars = stars_for(out.p_value);
    out.df_or_lag = p;
    return out;
}

TestResult adf_test(const ReturnSeries& returns, std::optional<int> lag, AdfRegression regression) {
    return adf_test(returns.values(), lag, regression);
}

}  // namespace fractalis
