#include <cmath>
#include <random>

#include "doctest.h"
#include "fractalis/error.hpp"
#include "fractalis/returns.hpp"

using namespace fractalis;
using namespace std::chrono;

namespace {

PriceSeries prices_of(const std::vector<double>& values) {
    PriceSeries s{"X", Frequency::Day1, {}};
    for (std::size_t i = 0; i < values.size(); ++i) s.points.push_back({make_date(2021, 1, 1) + days{i}, values[i]});
    return s;
}

std::vector<double> random_prices(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> step(-0.05, 0.05);
    std::vector<double> out{100.0};
    for (std::size_t i = 1; i < n; ++i) out.push_back(out.back() * std::exp(step(gen)));
    return out;
}

}  // namespace

TEST_CASE("log_returns") {
    SUBCASE("constant prices give zero returns") {
        const auto r = log_returns(prices_of({100, 100, 100}));
        REQUIRE(r.size() == 2);
        CHECK(r.points[0].value == 0.0);
        CHECK(r.points[1].value == 0.0);
    }
    SUBCASE("percent scale") {
        const auto r = log_returns(prices_of({100, 110}), ReturnScale::Percent);
        REQUIRE(r.size() == 1);
        // 100 ln 1.1, 40-digit reference.
        CHECK(r.points[0].value == doctest::Approx(9.531017980432486004).epsilon(1e-15));
        CHECK(r.scale == ReturnScale::Percent);
    }
    SUBCASE("raw scale and timestamps of P_t") {
        const auto p = prices_of({100, 110, 99});
        const auto r = log_returns(p, ReturnScale::Raw);
        CHECK(r.points[0].value == doctest::Approx(std::log(1.1)));
        CHECK(r.points[0].time == p.points[1].time);
        CHECK(r.points[1].time == p.points[2].time);
    }
    SUBCASE("609 prices give 608 returns") {
        CHECK(log_returns(prices_of(random_prices(3, 609))).size() == 608);
    }
    SUBCASE("too short") {
        CHECK_THROWS_AS(log_returns(prices_of({100})), Error);
        CHECK_THROWS_AS(log_returns(prices_of({})), Error);
    }
}

TEST_CASE("log returns telescope and ignore the price unit") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto values = random_prices(seed, 50 + seed * 13);
        const auto r = log_returns(prices_of(values), ReturnScale::Raw);
        double sum = 0.0;
        for (const auto& p : r.points) sum += p.value;
        const double expected = std::log(values.back() / values.front());
        CHECK(std::abs(sum - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));

        std::vector<double> scaled = values;
        for (double& v : scaled) v *= 37.25;
        const auto rs = log_returns(prices_of(scaled), ReturnScale::Raw);
        for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(rs.points[i].value - r.points[i].value) <= 1e-12);
    }
}

TEST_CASE("power_transform") {
    ReturnSeries r;
    r.scale = ReturnScale::Raw;
    r.points = {{make_date(2021, 1, 1), 2.0}, {make_date(2021, 1, 2), -1.0}};

    SUBCASE("q = 1 is the identity on raw returns") { CHECK(power_transform(r, 1).points == r.points); }
    SUBCASE("cubes") {
        const auto c = power_transform(r, 3);
        CHECK(c.points[0].value == 8.0);
        CHECK(c.points[1].value == -1.0);
        CHECK(c.power == 3);
    }
    SUBCASE("even and non-positive powers are rejected") {
        try {
            (void)power_transform(r, 2);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EvenPower);
        }
        CHECK_THROWS_AS(power_transform(r, 0), Error);
        CHECK_THROWS_AS(power_transform(r, -3), Error);
    }
    SUBCASE("percent input is unscaled before exponentiation") {
        ReturnSeries pct;
        pct.scale = ReturnScale::Percent;
        pct.points = {{make_date(2021, 1, 1), 30.0}, {make_date(2021, 1, 2), -45.0}};
        const auto t = power_transform(pct, 17);
        CHECK(t.scale == ReturnScale::Raw);
        CHECK(t.pre_scale == 0.01);
        CHECK(t.power == 17);
        CHECK(std::isfinite(t.points[1].value));
        CHECK(t.points[0].value == doctest::Approx(std::pow(0.30, 17)));
        CHECK(t.points[1].value == doctest::Approx(-std::pow(0.45, 17)));
    }
    SUBCASE("odd powers keep every sign") {
        std::mt19937_64 gen(9);
        std::normal_distribution<double> nd;
        ReturnSeries big;
        big.scale = ReturnScale::Raw;
        for (int i = 0; i < 500; ++i) big.points.push_back({make_date(2021, 1, 1) + days{i}, nd(gen)});
        const auto t = power_transform(big, 17);
        for (std::size_t i = 0; i < big.size(); ++i)
            CHECK(std::signbit(t.points[i].value) == std::signbit(big.points[i].value));
    }
}
