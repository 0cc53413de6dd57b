#include "fractalis/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <vector>

#include "fractalis/error.hpp"

namespace fractalis {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string normalized(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF && static_cast<unsigned char>(s[1]) == 0xBB &&
        static_cast<unsigned char>(s[2]) == 0xBF)
        s.erase(0, 3);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::optional<double> parse_double(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || std::isnan(value)) return std::nullopt;
    return value;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
    const std::string wanted = normalized(name);
    for (std::size_t i = 0; i < header.size(); ++i)
        if (normalized(header[i]) == wanted) return i;
    throw Error(ErrorCode::MalformedCsv, "missing column '" + name + "' in header");
}

}  // namespace

PeriodSpec::PeriodSpec(Timestamp start_, Timestamp end_) : start(start_), end(end_) {
    if (!(start < end)) throw Error(ErrorCode::InvalidArgument, "period start must precede end");
}

PriceSeries parse_price_csv(std::istream& in, const CsvSchema& schema) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (normalized(line).empty()) continue;
        header = split_csv_line(line);
        break;
    }
    if (header.empty()) throw Error(ErrorCode::MalformedCsv, "empty input, header row expected");

    const std::size_t ts_col = column_index(header, schema.timestamp_column);
    const std::size_t price_col = column_index(header, schema.price_column);

    PriceSeries series;
    series.asset_id = schema.asset_id;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (normalized(line).empty()) continue;
        ++row;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw Error(ErrorCode::MalformedCsv, "row " + std::to_string(row) + " has " +
                                                     std::to_string(fields.size()) + " fields, header has " +
                                                     std::to_string(header.size()));
        const auto ts = parse_timestamp(fields[ts_col]);
        if (!ts) throw Error(ErrorCode::MalformedCsv, "row " + std::to_string(row) + ": bad timestamp '" + fields[ts_col] + "'");
        const auto price = parse_double(fields[price_col]);
        if (!price) throw Error(ErrorCode::MalformedCsv, "row " + std::to_string(row) + ": bad price '" + fields[price_col] + "'");
        if (!(*price > 0.0) || !std::isfinite(*price))
            throw Error(ErrorCode::NonPositivePrice, "row " + std::to_string(row) + ": price " + fields[price_col]);
        series.points.push_back({*ts, *price});
    }

    std::stable_sort(series.points.begin(), series.points.end(),
                     [](const PricePoint& a, const PricePoint& b) { return a.time < b.time; });
    const auto dup = std::adjacent_find(series.points.begin(), series.points.end(),
                                        [](const PricePoint& a, const PricePoint& b) { return a.time == b.time; });
    if (dup != series.points.end())
        throw Error(ErrorCode::DuplicateTimestamp, "timestamp " + format_timestamp(dup->time) + " appears twice");

    series.frequency = schema.frequency ? *schema.frequency : infer_frequency(series);
    return series;
}

PriceSeries load_price_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    return parse_price_csv(in, schema);
}

void write_price_csv(std::ostream& out, const PriceSeries& series) {
    out << "timestamp,open\n";
    for (const auto& p : series.points)
        out << format_timestamp(p.time) << ',' << std::setprecision(std::numeric_limits<double>::max_digits10)
            << p.price << '\n';
}

Frequency infer_frequency(const PriceSeries& series) noexcept {
    if (series.size() < 2) return Frequency::Day1;
    auto smallest = std::chrono::milliseconds::max();
    for (std::size_t i = 1; i < series.size(); ++i)
        smallest = std::min(smallest, std::chrono::milliseconds{series.points[i].time - series.points[i - 1].time});
    if (smallest >= frequency_step(Frequency::Day1)) return Frequency::Day1;
    if (smallest >= frequency_step(Frequency::Hour1)) return Frequency::Hour1;
    return Frequency::Min15;
}

PriceSeries resample(const PriceSeries& series, Frequency target) {
    if (frequency_step(target) < frequency_step(series.frequency))
        throw Error(ErrorCode::UpsampleRequested, "cannot resample " + std::string(to_string(series.frequency)) +
                                                      " data to " + std::string(to_string(target)));
    if (target == series.frequency) return series;

    PriceSeries out{series.asset_id, target, {}};
    for (const auto& p : series.points) {
        const Timestamp bucket = bucket_start(p.time, target);
        if (out.points.empty() || out.points.back().time != bucket) out.points.push_back({bucket, p.price});
    }
    return out;
}

PriceSeries filter_weekdays(const PriceSeries& series) {
    PriceSeries out{series.asset_id, series.frequency, {}};
    std::copy_if(series.points.begin(), series.points.end(), std::back_inserter(out.points),
                 [](const PricePoint& p) { return is_weekday(p.time); });
    return out;
}

PriceSeries slice_period(const PriceSeries& series, const PeriodSpec& period) {
    PriceSeries out{series.asset_id, series.frequency, {}};
    std::copy_if(series.points.begin(), series.points.end(), std::back_inserter(out.points),
                 [&](const PricePoint& p) { return period.start <= p.time && p.time < period.end; });
    return out;
}

std::pair<ReturnSeries, ReturnSeries> align(const ReturnSeries& a, const ReturnSeries& b) {
    if (a.frequency != b.frequency)
        throw Error(ErrorCode::FrequencyMismatch, a.asset_id + " and " + b.asset_id + " have different frequencies");
    ReturnSeries left = a;
    ReturnSeries right = b;
    left.points.clear();
    right.points.clear();
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a.points[i].time < b.points[j].time) {
            ++i;
        } else if (b.points[j].time < a.points[i].time) {
            ++j;
        } else {
            left.points.push_back(a.points[i++]);
            right.points.push_back(b.points[j++]);
        }
    }
    if (left.empty()) throw Error(ErrorCode::NoOverlap, a.asset_id + " and " + b.asset_id + " share no timestamps");
    return {std::move(left), std::move(right)};
}

}  // namespace fractalis
