#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fractalis/error.hpp"
#include "fractalis/stats.hpp"
#include "fractalis/synth.hpp"
#include "oracles/oracles.hpp"

using namespace fractalis;
using namespace std::chrono;

namespace {

ReturnSeries series_of(std::string id, const std::vector<double>& v, Timestamp start = make_date(2021, 1, 1)) {
    ReturnSeries r;
    r.asset_id = std::move(id);
    for (std::size_t i = 0; i < v.size(); ++i) r.points.push_back({start + days{i}, v[i]});
    return r;
}

const std::vector<double> kTen{0.3, -1.2, 0.5, 2.2, -0.7, 0.1, 1.4, -0.2, 0.9, -1.6};

}  // namespace

TEST_CASE("stars follow the 0.1% / 1% / 5% ladder") {
    CHECK(stars_for(0.0009) == Stars::S01);
    CHECK(stars_for(0.001) == Stars::S1);
    CHECK(stars_for(0.0099) == Stars::S1);
    CHECK(stars_for(0.01) == Stars::S5);
    CHECK(stars_for(0.0499) == Stars::S5);
    CHECK(stars_for(0.05) == Stars::None);
    CHECK(to_string(Stars::S01) == "***");
}

TEST_CASE("describe") {
    SUBCASE("symmetric pair") {
        const std::vector<double> v{-1.0, 1.0};
        const auto d = describe(v);
        CHECK(d.n == 2);
        CHECK(d.mean == 0.0);
        CHECK(d.median == 0.0);
        CHECK(d.std == doctest::Approx(std::sqrt(2.0)));
        CHECK(d.skewness == 0.0);
        CHECK(d.kurtosis == 1.0);
    }
    SUBCASE("ten values against direct summation") {
        const auto d = describe(kTen);
        const auto o = oracle::moments(kTen);
        CHECK(d.mean == doctest::Approx(o.mean).epsilon(1e-13));
        CHECK(d.std == doctest::Approx(o.std).epsilon(1e-13));
        CHECK(d.skewness == doctest::Approx(o.skew).epsilon(1e-13));
        CHECK(d.kurtosis == doctest::Approx(o.kurt).epsilon(1e-13));
        CHECK(d.median == doctest::Approx(0.2));
        CHECK(d.max == 2.2);
        CHECK(d.min == -1.6);
    }
    SUBCASE("invariants") {
        const auto d = describe(kTen);
        CHECK(d.min <= d.median);
        CHECK(d.median <= d.max);
        CHECK(d.kurtosis >= 1.0);
        std::vector<double> shifted = kTen;
        for (double& v : shifted) v += 7.5;
        const auto s = describe(shifted);
        CHECK(s.mean == doctest::Approx(d.mean + 7.5).epsilon(1e-14));
        CHECK(s.std == doctest::Approx(d.std).epsilon(1e-12));
        CHECK(s.skewness == doctest::Approx(d.skewness).epsilon(1e-10));
        CHECK(s.kurtosis == doctest::Approx(d.kurtosis).epsilon(1e-10));
    }
    SUBCASE("too short") {
        const std::vector<double> one{1.0};
        CHECK_THROWS_AS(describe(one), Error);
    }
}

TEST_CASE("jarque_bera") {
    SUBCASE("exactly normal moments give JB = 0 and p = 1") {
        // S = 0 and K = n * 4 / 4^2 = 3 with n = 12.
        const std::vector<double> v{1, -1, 1, -1, 0, 0, 0, 0, 0, 0, 0, 0};
        const auto d = describe(v);
        CHECK(d.skewness == 0.0);
        CHECK(d.kurtosis == 3.0);
        const auto jb = jarque_bera(v);
        CHECK(jb.statistic == 0.0);
        CHECK(jb.p_value == 1.0);
        CHECK(jb.stars == Stars::None);
    }
    SUBCASE("matches scipy on a fixed sample") {
        const std::vector<double> v{0.3, -1.2, 0.5, 2.2, -0.7, 0.1, 1.4, -0.2, 0.9, -1.6, 3.1, -0.4};
        const auto jb = jarque_bera(v);
        CHECK(jb.statistic == doctest::Approx(0.6703780506170881).epsilon(1e-12));
        CHECK(jb.p_value == doctest::Approx(0.7152028821289865).epsilon(1e-12));
        CHECK(jb.df_or_lag == 2);
    }
    SUBCASE("heavy tails are flagged") {
        std::vector<double> v(200, 0.0);
        v[0] = 40.0;
        v[1] = -35.0;
        const auto jb = jarque_bera(v);
        CHECK(jb.statistic > 0.0);
        CHECK(jb.stars == Stars::S01);
    }
    SUBCASE("needs 8 values") { CHECK_THROWS_AS(jarque_bera(std::vector<double>(7, 1.0)), Error); }
    SUBCASE("statistic is never negative") {
        for (std::uint64_t seed = 1; seed <= 30; ++seed) CHECK(jarque_bera(white_noise(64, 1.0, seed)).statistic >= 0.0);
    }
}

TEST_CASE("pearson") {
    const std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const std::vector<double> b{2, 1, 4, 3, 6, 5, 8, 7, 10, 9};

    SUBCASE("reference values") {
        const auto c = pearson(a, b);
        CHECK(c.r == doctest::Approx(0.9393939393939392).epsilon(1e-14));
        CHECK(c.test.p_value == doctest::Approx(5.484052998513713e-05).epsilon(1e-9));
        CHECK(c.test.stars == Stars::S01);
        CHECK(c.test.df_or_lag == 8);
        const std::vector<double> d{1.1, 0.4, -0.3, 0.8, -1.0, 0.6, 0.2, -0.5, 1.5, -0.9};
        const auto e = pearson(kTen, d);
        CHECK(e.r == doctest::Approx(0.5712247315760565).epsilon(1e-13));
        CHECK(e.test.p_value == doctest::Approx(0.084549899986492).epsilon(1e-10));
        CHECK(e.test.stars == Stars::None);
    }
    SUBCASE("identity and antisymmetry") {
        const auto same = pearson(kTen, kTen);
        CHECK(same.r == 1.0);
        CHECK(same.test.p_value == 0.0);
        CHECK(same.test.stars == Stars::S01);
        std::vector<double> neg = kTen;
        for (double& v : neg) v = -v;
        CHECK(pearson(kTen, neg).r == -1.0);
    }
    SUBCASE("positive affine invariance") {
        std::vector<double> t = b;
        for (double& v : t) v = 3.5 * v - 12.0;
        CHECK(std::abs(pearson(a, t).r - pearson(a, b).r) <= 1e-10);
    }
    SUBCASE("errors") {
        const std::vector<double> shorter{1, 2, 3};
        try {
            (void)pearson(a, shorter);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::LengthMismatch);
        }
        const std::vector<double> flat(10, 4.2);
        try {
            (void)pearson(a, flat);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ZeroVariance);
        }
    }
}

TEST_CASE("correlation_matrix") {
    SUBCASE("two identical series") {
        const auto m = correlation_matrix({series_of("A", kTen), series_of("B", kTen)});
        REQUIRE(m.dim() == 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) CHECK(m.at(i, j).value->r == 1.0);
    }

    std::vector<ReturnSeries> panel;
    for (int k = 0; k < 9; ++k) panel.push_back(series_of("C" + std::to_string(k), white_noise(120, 1.0, 100 + k)));
    // A shifted calendar exercises alignment inside the matrix.
    panel.push_back(series_of("LATE", white_noise(120, 1.0, 7), make_date(2021, 1, 1) + days{30}));
    const auto m = correlation_matrix(panel);

    SUBCASE("every cell equals an independent per-pair computation") {
        for (std::size_t i = 0; i < panel.size(); ++i)
            for (std::size_t j = 0; j < panel.size(); ++j) {
                const auto& cell = m.at(i, j);
                REQUIRE(cell.value);
                if (i == j) {
                    CHECK(cell.value->r == 1.0);
                    continue;
                }
                std::vector<double> x, y;
                for (const auto& p : panel[i].points)
                    for (const auto& q : panel[j].points)
                        if (p.time == q.time) {
                            x.push_back(p.value);
                            y.push_back(q.value);
                        }
                CHECK(cell.n == x.size());
                const double mx = std::accumulate(x.begin(), x.end(), 0.0L) / x.size();
                const double my = std::accumulate(y.begin(), y.end(), 0.0L) / y.size();
                long double sxy = 0, sxx = 0, syy = 0;
                for (std::size_t t = 0; t < x.size(); ++t) {
                    sxy += (x[t] - mx) * (y[t] - my);
                    sxx += (x[t] - mx) * (x[t] - mx);
                    syy += (y[t] - my) * (y[t] - my);
                }
                CHECK(cell.value->r == doctest::Approx(static_cast<double>(sxy / std::sqrt(sxx * syy))).epsilon(1e-12));
            }
    }
    SUBCASE("symmetric with unit diagonal") {
        for (std::size_t i = 0; i < m.dim(); ++i) {
            CHECK(m.at(i, i).value->r == 1.0);
            for (std::size_t j = 0; j < m.dim(); ++j) {
                CHECK(m.at(i, j) == m.at(j, i));
                CHECK(std::abs(m.at(i, j).value->r) <= 1.0);
            }
        }
    }
    SUBCASE("permuting inputs permutes the matrix") {
        std::vector<std::size_t> order(panel.size());
        std::iota(order.begin(), order.end(), 0);
        std::reverse(order.begin(), order.end());
        std::swap(order[0], order[4]);
        std::vector<ReturnSeries> shuffled;
        for (std::size_t i : order) shuffled.push_back(panel[i]);
        const auto p = correlation_matrix(shuffled);
        for (std::size_t i = 0; i < order.size(); ++i)
            for (std::size_t j = 0; j < order.size(); ++j) CHECK(p.at(i, j) == m.at(order[i], order[j]));
    }
    SUBCASE("failed pairs are recorded, not thrown") {
        auto far = series_of("FAR", kTen, make_date(2030, 1, 1));
        const auto f = correlation_matrix({series_of("A", kTen), far});
        CHECK_FALSE(f.at(0, 1).value);
        CHECK(f.at(0, 1).error.find("NoOverlap") != std::string::npos);
        CHECK(f.at(0, 0).value->r == 1.0);
    }
    SUBCASE("needs two series") { CHECK_THROWS_AS(correlation_matrix({series_of("A", kTen)}), Error); }
}
