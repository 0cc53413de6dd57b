#include "fractalis/time.hpp"

#include <charconv>
#include <cstdio>

#include "fractalis/series.hpp"

namespace fractalis {

namespace {

using namespace std::chrono;

// Reads exactly `width` digits at `pos`.
bool read_fixed(std::string_view s, std::size_t& pos, std::size_t width, int& out) {
    if (pos + width > s.size()) return false;
    int value = 0;
    for (std::size_t i = 0; i < width; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    pos += width;
    return true;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (start == s.size()) return false;
    for (std::size_t i = start; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

milliseconds frequency_step(Frequency f) noexcept {
    switch (f) {
        case Frequency::Min15: return minutes{15};
        case Frequency::Hour1: return hours{1};
        case Frequency::Day1: return days{1};
    }
    return days{1};
}

std::string_view to_string(Frequency f) noexcept {
    switch (f) {
        case Frequency::Min15: return "15m";
        case Frequency::Hour1: return "1h";
        case Frequency::Day1: return "1d";
    }
    return "?";
}

std::optional<Frequency> parse_frequency(std::string_view text) noexcept {
    if (text == "15m" || text == "15min") return Frequency::Min15;
    if (text == "1h" || text == "60m") return Frequency::Hour1;
    if (text == "1d" || text == "daily") return Frequency::Day1;
    return std::nullopt;
}

std::string_view to_string(ReturnScale s) noexcept {
    return s == ReturnScale::Percent ? "percent" : "raw";
}

Timestamp bucket_start(Timestamp t, Frequency f) noexcept {
    const auto step = frequency_step(f).count();
    const auto ms = t.time_since_epoch().count();
    auto q = ms / step;
    if (ms % step < 0) --q;
    return Timestamp{milliseconds{q * step}};
}

std::optional<Timestamp> parse_timestamp(std::string_view text) noexcept {
    std::string_view s = trim(text);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    if (s.empty()) return std::nullopt;

    if (all_digits(s)) {
        long long ms = 0;
        const char* first = s.data() + (s.front() == '+' ? 1 : 0);
        auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), ms);
        if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
        return Timestamp{milliseconds{ms}};
    }

    std::size_t pos = 0;
    int y = 0, mo = 0, d = 0;
    if (!read_fixed(s, pos, 4, y)) return std::nullopt;
    if (pos >= s.size() || s[pos++] != '-') return std::nullopt;
    if (!read_fixed(s, pos, 2, mo)) return std::nullopt;
    if (pos >= s.size() || s[pos++] != '-') return std::nullopt;
    if (!read_fixed(s, pos, 2, d)) return std::nullopt;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;

    milliseconds tod{0};
    if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
        ++pos;
        int hh = 0, mm = 0, ss = 0;
        if (!read_fixed(s, pos, 2, hh)) return std::nullopt;
        if (pos >= s.size() || s[pos++] != ':') return std::nullopt;
        if (!read_fixed(s, pos, 2, mm)) return std::nullopt;
        if (pos < s.size() && s[pos] == ':') {
            ++pos;
            if (!read_fixed(s, pos, 2, ss)) return std::nullopt;
            if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
                ++pos;
                int frac_ms = 0, digits = 0;
                while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                    if (digits < 3) frac_ms = frac_ms * 10 + (s[pos] - '0');
                    ++digits;
                    ++pos;
                }
                if (digits == 0) return std::nullopt;
                for (int i = digits; i < 3; ++i) frac_ms *= 10;
                tod += milliseconds{frac_ms};
            }
        }
        if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
        tod += hours{hh} + minutes{mm} + seconds{ss};

        if (pos < s.size()) {
            const char z = s[pos];
            if (z == 'Z' || z == 'z') {
                ++pos;
            } else if (z == '+' || z == '-') {
                ++pos;
                int oh = 0, om = 0;
                if (!read_fixed(s, pos, 2, oh)) return std::nullopt;
                if (pos < s.size() && s[pos] == ':') ++pos;
                if (pos < s.size() && !read_fixed(s, pos, 2, om)) return std::nullopt;
                const milliseconds offset = hours{oh} + minutes{om};
                tod -= (z == '+') ? offset : -offset;
            }
        }
    }
    if (pos != s.size()) return std::nullopt;
    return Timestamp{sys_days{ymd}} + tod;
}

std::string format_timestamp(Timestamp t) {
    const auto day_start = floor<days>(t);
    const year_month_day ymd{day_start};
    const hh_mm_ss<milliseconds> tod{t - day_start};
    char buf[40];
    const auto ms = tod.subseconds().count();
    if (ms != 0) {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                      static_cast<long long>(tod.hours().count()), static_cast<long long>(tod.minutes().count()),
                      static_cast<long long>(tod.seconds().count()), static_cast<long long>(ms));
    } else {
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                      static_cast<long long>(tod.hours().count()), static_cast<long long>(tod.minutes().count()),
                      static_cast<long long>(tod.seconds().count()));
    }
    return buf;
}

std::string format_date(Timestamp t) {
    const year_month_day ymd{floor<days>(t)};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

bool is_weekday(Timestamp t) noexcept {
    const weekday wd{floor<days>(t)};
    return wd != Saturday && wd != Sunday;
}

}  // namespace fractalis
