#include "fractalis/returns.hpp"

#include <cmath>

#include "fractalis/error.hpp"

namespace fractalis {

std::vector<double> ReturnSeries::values() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.value);
    return out;
}

ReturnSeries log_returns(const PriceSeries& prices, ReturnScale scale) {
    if (prices.size() < 2)
        throw Error(ErrorCode::TooShort, prices.asset_id + ": log returns need at least 2 prices, got " +
                                             std::to_string(prices.size()));
    const double factor = scale == ReturnScale::Percent ? 100.0 : 1.0;
    ReturnSeries out;
    out.asset_id = prices.asset_id;
    out.frequency = prices.frequency;
    out.scale = scale;
    out.points.reserve(prices.size() - 1);
    for (std::size_t t = 1; t < prices.size(); ++t) {
        const double prev = prices.points[t - 1].price;
        const double cur = prices.points[t].price;
        if (!(prev > 0.0) || !(cur > 0.0))
            throw Error(ErrorCode::NonPositivePrice, prices.asset_id + ": non-positive price at index " + std::to_string(t));
        out.points.push_back({prices.points[t].time, factor * std::log(cur / prev)});
    }
    return out;
}

ReturnSeries power_transform(const ReturnSeries& returns, int q) {
    if (q < 1) throw Error(ErrorCode::InvalidArgument, "power must be a positive odd integer, got " + std::to_string(q));
    if (q % 2 == 0) throw Error(ErrorCode::EvenPower, "power " + std::to_string(q) + " would discard return signs");

    ReturnSeries out = returns;
    const double unscale = returns.scale == ReturnScale::Percent ? 0.01 : 1.0;
    out.scale = ReturnScale::Raw;
    out.power = returns.power * q;
    out.pre_scale = returns.pre_scale * unscale;
    for (auto& p : out.points) {
        const double base = p.value * unscale;
        double acc = 1.0;
        for (int k = 0; k < q; ++k) acc *= base;
        p.value = acc;
    }
    return out;
}

}  // namespace fractalis
