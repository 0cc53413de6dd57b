#pragma once

#include <span>
#include <string>
#include <vector>

#include "fractalis/time.hpp"

namespace fractalis {

struct PricePoint {
    Timestamp time;
    double price;

    friend bool operator==(const PricePoint&, const PricePoint&) = default;
};

/// Opening prices of one asset at one frequency. Timestamps strictly increase,
/// prices are positive; gaps are allowed, duplicates are not.
struct PriceSeries {
    std::string asset_id;
    Frequency frequency = Frequency::Day1;
    std::vector<PricePoint> points;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
    [[nodiscard]] bool empty() const noexcept { return points.empty(); }

    friend bool operator==(const PriceSeries&, const PriceSeries&) = default;
};

enum class ReturnScale { Percent, Raw };

struct ReturnPoint {
    Timestamp time;
    double value;

    friend bool operator==(const ReturnPoint&, const ReturnPoint&) = default;
};

struct ReturnSeries {
    std::string asset_id;
    Frequency frequency = Frequency::Day1;
    std::vector<ReturnPoint> points;
    ReturnScale scale = ReturnScale::Percent;
    // Set by power_transform: the exponent applied and the factor the input
    // was multiplied by beforehand (0.01 when percent returns were unscaled).
    int power = 1;
    double pre_scale = 1.0;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
    [[nodiscard]] bool empty() const noexcept { return points.empty(); }
    [[nodiscard]] std::vector<double> values() const;

    friend bool operator==(const ReturnSeries&, const ReturnSeries&) = default;
};

[[nodiscard]] std::string_view to_string(ReturnScale s) noexcept;

}  // namespace fractalis
