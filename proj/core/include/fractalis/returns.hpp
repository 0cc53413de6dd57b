#pragma once

#include "fractalis/series.hpp"

namespace fractalis {

/// r_t = ln(P_t / P_{t-1}), times 100 for ReturnScale::Percent. Each return
/// carries the timestamp of P_t. Throws Error{TooShort} below two prices.
[[nodiscard]] ReturnSeries log_returns(const PriceSeries& prices, ReturnScale scale = ReturnScale::Percent);

/// Raises every return to an odd power q, preserving signs. Percent-scaled
/// input is converted to raw log returns first (pre_scale = 0.01) so that
/// large moves do not overflow; R/S is scale-free so this does not change H.
/// Throws Error{EvenPower} for even q and Error{InvalidArgument} for q < 1.
[[nodiscard]] ReturnSeries power_transform(const ReturnSeries& returns, int q);

}  // namespace fractalis
