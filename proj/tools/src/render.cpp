#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>

#include "fractalis/app/tables.hpp"

namespace fractalis::app {

namespace {

std::string printf_string(const char* fmt, ...) __attribute__((format(printf, 1, 2)));

std::string printf_string(const char* fmt, ...) {
    char buf[64];
    va_list args;
    va_start(args, fmt);
    const int len = std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return std::string(buf, static_cast<std::size_t>(std::max(len, 0)));
}

std::string fixed4(double v) { return printf_string("%.4f", v); }
std::string exact(double v) { return printf_string("%.17g", v); }
std::string plot(double v) { return printf_string("%.12g", v); }

std::string starred(const std::string& value, Stars s) { return value + std::string(to_string(s)); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Pipes inside a cell would split it.
std::string md_cell(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c == '\n' ? ' ' : c;
    }
    return out;
}

void md_row(std::ostream& os, const std::vector<std::string>& cells) {
    os << '|';
    for (const auto& c : cells) os << ' ' << md_cell(c) << " |";
    os << '\n';
}

// One character per column: 'l' left, 'r' right.
void md_rule(std::ostream& os, std::string_view align) {
    os << '|';
    for (char a : align) os << (a == 'l' ? ":---|" : "---:|");
    os << '\n';
}

void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << '\n';
}

template <typename T>
std::string json_text(const T& t) {
    nlohmann::json j = t;
    return j.dump(2) + "\n";
}

}  // namespace

std::string format_h(double h) { return printf_string("%.5f", h); }

std::string format_p(double p) {
    if (p < 0.001) return printf_string("%.2e", p);
    return printf_string("%.5f", p);
}

std::string render(const StatsTable& t, OutputFormat f) {
    if (f == OutputFormat::Json) return json_text(t);
    std::ostringstream os;
    if (f == OutputFormat::Markdown) {
        md_row(os, {"Asset", "N", "Mean", "Median", "Std.", "Max.", "Min.", "Skew.", "Kurt.", "J. Bera"});
        md_rule(os, "lrrrrrrrrr");
        for (const auto& r : t.rows) {
            if (!r.stats || !r.jb) {
                md_row(os, {r.asset_id, "", "", "", "", "", "", "", "", "error: " + r.error});
                continue;
            }
            const auto& s = *r.stats;
            md_row(os, {r.asset_id, std::to_string(s.n), fixed4(s.mean), fixed4(s.median), fixed4(s.std), fixed4(s.max),
                        fixed4(s.min), fixed4(s.skewness), fixed4(s.kurtosis),
                        starred(printf_string("%.5g", r.jb->statistic), r.jb->stars)});
        }
        return os.str();
    }
    csv_row(os, {"asset", "n", "mean", "median", "std", "max", "min", "skew", "kurt", "jb", "jb_p", "stars", "error"});
    for (const auto& r : t.rows) {
        if (!r.stats || !r.jb) {
            csv_row(os, {r.asset_id, "", "", "", "", "", "", "", "", "", "", "", r.error});
            continue;
        }
        const auto& s = *r.stats;
        csv_row(os, {r.asset_id, std::to_string(s.n), exact(s.mean), exact(s.median), exact(s.std), exact(s.max),
                     exact(s.min), exact(s.skewness), exact(s.kurtosis), exact(r.jb->statistic), exact(r.jb->p_value),
                     std::string(to_string(r.jb->stars)), ""});
    }
    return os.str();
}

std::string render(const AdfTable& t, OutputFormat f) {
    if (f == OutputFormat::Json) return json_text(t);
    std::ostringstream os;
    if (f == OutputFormat::Markdown) {
        md_row(os, {"Asset", "Freq", "N", "Lag", "ADF", "p-value"});
        md_rule(os, "llrrrr");
        for (const auto& r : t.rows) {
            if (!r.result) {
                md_row(os, {r.asset_id, r.frequency, r.n ? std::to_string(r.n) : "", "", "error: " + r.error, ""});
                continue;
            }
            md_row(os, {r.asset_id, r.frequency, std::to_string(r.n), std::to_string(r.result->df_or_lag),
                        starred(fixed4(r.result->statistic), r.result->stars), format_p(r.result->p_value)});
        }
        return os.str();
    }
    csv_row(os, {"asset", "frequency", "n", "lag", "statistic", "p_value", "stars", "error"});
    for (const auto& r : t.rows) {
        if (!r.result) {
            csv_row(os, {r.asset_id, r.frequency, r.n ? std::to_string(r.n) : "", "", "", "", "", r.error});
            continue;
        }
        csv_row(os, {r.asset_id, r.frequency, std::to_string(r.n), std::to_string(r.result->df_or_lag),
                     exact(r.result->statistic), exact(r.result->p_value), std::string(to_string(r.result->stars)), ""});
    }
    return os.str();
}

std::string render(const HurstTable& t, OutputFormat f) {
    if (f == OutputFormat::Json) return json_text(t);
    std::ostringstream os;
    if (f == OutputFormat::Markdown) {
        md_row(os, {"Asset", "Freq", "Period", "N", "Hurst", "p-value", "Class"});
        md_rule(os, "lllrrrl");
        for (const auto& r : t.rows) {
            if (!r.estimate) {
                md_row(os, {r.asset_id, r.frequency, r.period, r.n ? std::to_string(r.n) : "", "", "",
                            "warning: " + r.error});
                continue;
            }
            md_row(os, {r.asset_id, r.frequency, r.period, std::to_string(r.n), format_h(r.estimate->h),
                        format_p(r.estimate->p_value), std::string(to_string(*r.memory))});
        }
        return os.str();
    }
    csv_row(os, {"asset", "frequency", "period", "n", "h", "std_err", "t_stat", "p_value", "ci_low", "ci_high",
                 "fractal_dimension", "k_points", "class", "error"});
    for (const auto& r : t.rows) {
        if (!r.estimate) {
            csv_row(os, {r.asset_id, r.frequency, r.period, r.n ? std::to_string(r.n) : "", "", "", "", "", "", "", "",
                         "", "", r.error});
            continue;
        }
        const auto& e = *r.estimate;
        csv_row(os, {r.asset_id, r.frequency, r.period, std::to_string(r.n), exact(e.h), exact(e.std_err),
                     exact(e.t_stat), exact(e.p_value), exact(e.ci_low), exact(e.ci_high),
                     exact(e.fractal_dimension), std::to_string(e.k_points), std::string(to_string(*r.memory)), ""});
    }
    return os.str();
}

std::string render(const RollingTable& t, OutputFormat f) {
    if (f == OutputFormat::Json) return json_text(t);
    std::ostringstream os;
    const bool md = f == OutputFormat::Markdown;
    const auto emit = [&](const std::vector<std::string>& cells) { md ? md_row(os, cells) : csv_row(os, cells); };
    emit({"timestamp", "h", "ci_low", "ci_high"});
    if (md) md_rule(os, "lrrr");
    for (const auto& p : t.rolling.points) {
        if (!p.estimate) {
            emit({format_timestamp(p.time), "", "", ""});
            continue;
        }
        emit({format_timestamp(p.time), plot(p.estimate->h), plot(p.estimate->ci_low), plot(p.estimate->ci_high)});
    }
    return os.str();
}

std::string render(const CorrTable& t, OutputFormat f) {
    if (f == OutputFormat::Json) return json_text(t);
    const auto& m = t.matrix;
    const std::size_t k = m.dim();
    std::ostringstream os;
    if (f == OutputFormat::Markdown) {
        std::vector<std::string> head{""};
        head.insert(head.end(), m.asset_ids.begin(), m.asset_ids.end());
        md_row(os, head);
        md_rule(os, "l" + std::string(k, 'r'));
        std::vector<std::string> warnings;
        for (std::size_t i = 0; i < k; ++i) {
            std::vector<std::string> row{m.asset_ids[i]};
            for (std::size_t j = 0; j < k; ++j) {
                if (j > i) {
                    row.emplace_back();
                    continue;
                }
                const auto& c = m.at(i, j);
                if (!c.value) {
                    row.emplace_back();
                    if (j < i) warnings.push_back(m.asset_ids[i] + "/" + m.asset_ids[j] + ": " + c.error);
                    continue;
                }
                row.push_back(i == j ? "1" : starred(fixed4(c.value->r), c.value->test.stars));
            }
            md_row(os, row);
        }
        if (!warnings.empty()) {
            os << '\n';
            for (const auto& w : warnings) os << "warning: " << w << '\n';
        }
        return os.str();
    }
    csv_row(os, {"asset_a", "asset_b", "n", "r", "t_stat", "p_value", "stars", "error"});
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const auto& c = m.at(i, j);
            if (!c.value) {
                csv_row(os, {m.asset_ids[i], m.asset_ids[j], std::to_string(c.n), "", "", "", "", c.error});
                continue;
            }
            csv_row(os, {m.asset_ids[i], m.asset_ids[j], std::to_string(c.n), exact(c.value->r),
                         exact(c.value->test.statistic), exact(c.value->test.p_value),
                         std::string(to_string(c.value->test.stars)), ""});
        }
    }
    return os.str();
}

std::string render_curve_dump(const HurstTable& t) {
    std::ostringstream os;
    csv_row(os, {"asset", "frequency", "period", "n", "log_n", "log_rs", "fit", "band_low", "band_high"});
    for (const auto& r : t.rows) {
        if (!r.estimate) continue;
        for (const auto& p : r.curve.points) {
            const double log_n = std::log(static_cast<double>(p.n));
            const auto band = fit_band(*r.estimate, log_n);
            csv_row(os, {r.asset_id, r.frequency, r.period, std::to_string(p.n), plot(log_n), plot(std::log(p.rs)),
                         plot(band.fit), plot(band.low), plot(band.high)});
        }
    }
    return os.str();
}

}  // namespace fractalis::app
