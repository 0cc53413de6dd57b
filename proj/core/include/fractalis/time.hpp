#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace fractalis {

/// UTC instant with millisecond resolution (Binance exports use epoch milliseconds).
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

enum class Frequency { Min15, Hour1, Day1 };

[[nodiscard]] std::chrono::milliseconds frequency_step(Frequency f) noexcept;

/// "15m", "1h", "1d".
[[nodiscard]] std::string_view to_string(Frequency f) noexcept;
[[nodiscard]] std::optional<Frequency> parse_frequency(std::string_view text) noexcept;

/// Start of the UTC-aligned bucket containing `t` (midnight, top of hour, quarter hour).
[[nodiscard]] Timestamp bucket_start(Timestamp t, Frequency f) noexcept;

/// Accepts ISO-8601 dates and date-times ("2020-08-20", "2020-08-20T09:30:00Z",
/// "2020-08-20 09:30", fractional seconds, numeric offsets) and integer epoch
/// milliseconds. Returns nullopt on anything else.
[[nodiscard]] std::optional<Timestamp> parse_timestamp(std::string_view text) noexcept;

/// ISO-8601 UTC, e.g. "2020-08-20T00:00:00Z". Milliseconds are printed only when nonzero.
[[nodiscard]] std::string format_timestamp(Timestamp t);

/// "2020-08-20".
[[nodiscard]] std::string format_date(Timestamp t);

[[nodiscard]] bool is_weekday(Timestamp t) noexcept;

[[nodiscard]] constexpr Timestamp make_date(int year, unsigned month, unsigned day) noexcept {
    using namespace std::chrono;
    return Timestamp{sys_days{std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day}}};
}

}  // namespace fractalis
