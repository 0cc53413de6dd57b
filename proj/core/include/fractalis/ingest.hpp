#pragma once

#include <istream>
#include <optional>
#include <string>
#include <utility>

#include "fractalis/series.hpp"

namespace fractalis {

/// Half-open UTC interval [start, end).
struct PeriodSpec {
    Timestamp start;
    Timestamp end;

    PeriodSpec(Timestamp start_, Timestamp end_);
};

struct CsvSchema {
    std::string asset_id;
    std::string timestamp_column = "timestamp";
    std::string price_column = "open";
    // When unset the frequency is inferred from the smallest timestamp spacing.
    std::optional<Frequency> frequency;
};

/// Parses a header-first CSV of opening prices. Extra columns are ignored and
/// rows may arrive in any order; the result is sorted by timestamp.
/// Throws Error{MalformedCsv} for a bad header, row arity or unparsable field,
/// Error{NonPositivePrice} (message carries the 1-based data row) and
/// Error{DuplicateTimestamp}.
[[nodiscard]] PriceSeries parse_price_csv(std::istream& in, const CsvSchema& schema);

[[nodiscard]] PriceSeries load_price_csv(const std::string& path, const CsvSchema& schema);

/// Writes the same two-column layout parse_price_csv reads.
void write_price_csv(std::ostream& out, const PriceSeries& series);

/// Smallest spacing >= 1 day -> Day1, >= 1 hour -> Hour1, else Min15.
[[nodiscard]] Frequency infer_frequency(const PriceSeries& series) noexcept;

/// Keeps the first observation of every UTC-aligned target bucket, stamped
/// with the bucket start. Same-frequency resampling returns the input as is.
[[nodiscard]] PriceSeries resample(const PriceSeries& series, Frequency target);

[[nodiscard]] PriceSeries filter_weekdays(const PriceSeries& series);

[[nodiscard]] PriceSeries slice_period(const PriceSeries& series, const PeriodSpec& period);

/// Restricts both series to their common timestamps. Throws
/// Error{FrequencyMismatch} or Error{NoOverlap}.
[[nodiscard]] std::pair<ReturnSeries, ReturnSeries> align(const ReturnSeries& a, const ReturnSeries& b);

}  // namespace fractalis
