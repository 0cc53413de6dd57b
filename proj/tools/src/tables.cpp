#include "fractalis/app/tables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fractalis/error.hpp"
#include "fractalis/parallel.hpp"

namespace fractalis::app {

using nlohmann::json;

namespace {

std::string describe_error(const std::exception& e) { return e.what(); }

// Non-finite doubles travel as strings so a parse of the rendered text gives
// back the same value.
json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double num(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
}

Stars parse_stars(const std::string& s) {
    switch (s.size()) {
        case 0: return Stars::None;
        case 1: return Stars::S5;
        case 2: return Stars::S1;
        default: return Stars::S01;
    }
}

MemoryKind parse_memory(const std::string& s) {
    if (s == "persistent") return MemoryKind::Persistent;
    if (s == "anti-persistent") return MemoryKind::AntiPersistent;
    return MemoryKind::Efficient;
}

template <typename T, typename F>
json opt(const std::optional<T>& v, F&& f) {
    return v ? f(*v) : json(nullptr);
}

template <typename T, typename F>
std::optional<T> opt_from(const json& j, const char* key, F&& f) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return f(j.at(key));
}

json test_json(const TestResult& t) {
    return {{"statistic", num(t.statistic)},
            {"p_value", num(t.p_value)},
            {"stars", std::string(to_string(t.stars))},
            {"df_or_lag", t.df_or_lag}};
}

TestResult test_from(const json& j) {
    return {num(j.at("statistic")), num(j.at("p_value")), parse_stars(j.at("stars").get<std::string>()),
            j.at("df_or_lag").get<int>()};
}

json describe_json(const DescriptiveStats& s) {
    return {{"n", s.n},           {"mean", num(s.mean)}, {"median", num(s.median)},
            {"std", num(s.std)},  {"max", num(s.max)},   {"min", num(s.min)},
            {"skewness", num(s.skewness)}, {"kurtosis", num(s.kurtosis)}};
}

DescriptiveStats describe_from(const json& j) {
    return {j.at("n").get<std::size_t>(), num(j.at("mean")), num(j.at("median")), num(j.at("std")),
            num(j.at("max")),             num(j.at("min")),  num(j.at("skewness")), num(j.at("kurtosis"))};
}

json estimate_json(const HurstEstimate& e) {
    return {{"h", num(e.h)},
            {"log_c", num(e.log_c)},
            {"std_err", num(e.std_err)},
            {"t_stat", num(e.t_stat)},
            {"p_value", num(e.p_value)},
            {"ci_low", num(e.ci_low)},
            {"ci_high", num(e.ci_high)},
            {"confidence", num(e.confidence)},
            {"k_points", e.k_points},
            {"fractal_dimension", num(e.fractal_dimension)},
            {"out_of_range", e.out_of_range},
            {"residual_se", num(e.residual_se)},
            {"mean_log_n", num(e.mean_log_n)},
            {"ss_log_n", num(e.ss_log_n)},
            {"t_critical", num(e.t_critical)}};
}

HurstEstimate estimate_from(const json& j) {
    HurstEstimate e;
    e.h = num(j.at("h"));
    e.log_c = num(j.at("log_c"));
    e.std_err = num(j.at("std_err"));
    e.t_stat = num(j.at("t_stat"));
    e.p_value = num(j.at("p_value"));
    e.ci_low = num(j.at("ci_low"));
    e.ci_high = num(j.at("ci_high"));
    e.confidence = num(j.at("confidence"));
    e.k_points = j.at("k_points").get<std::size_t>();
    e.fractal_dimension = num(j.at("fractal_dimension"));
    e.out_of_range = j.at("out_of_range").get<bool>();
    e.residual_se = num(j.at("residual_se"));
    e.mean_log_n = num(j.at("mean_log_n"));
    e.ss_log_n = num(j.at("ss_log_n"));
    e.t_critical = num(j.at("t_critical"));
    return e;
}

}  // namespace

StatsTable build_stats(const std::vector<PreparedAsset>& assets, std::string frequency, std::string period) {
    StatsTable t{std::move(frequency), std::move(period), std::vector<StatsRow>(assets.size())};
    parallel_for(assets.size(), [&](std::size_t i) {
        auto& row = t.rows[i];
        row.asset_id = assets[i].asset_id;
        if (!assets[i].returns) {
            row.error = assets[i].error;
            return;
        }
        try {
            row.stats = describe(*assets[i].returns);
            row.jb = jarque_bera(*assets[i].returns);
        } catch (const std::exception& e) {
            row.error = describe_error(e);
        }
    });
    return t;
}

AdfTable build_adf(const std::vector<PreparedAsset>& assets, std::optional<int> lag) {
    AdfTable t{std::vector<AdfRow>(assets.size())};
    parallel_for(assets.size(), [&](std::size_t i) {
        auto& row = t.rows[i];
        row.asset_id = assets[i].asset_id;
        if (!assets[i].returns) {
            row.error = assets[i].error;
            return;
        }
        const auto& r = *assets[i].returns;
        row.frequency = std::string(to_string(r.frequency));
        row.n = r.size();
        try {
            row.result = adf_test(r, lag);
        } catch (const std::exception& e) {
            row.error = describe_error(e);
        }
    });
    return t;
}

HurstTable build_hurst(const std::vector<PreparedAsset>& assets, const std::string& period,
                       const PartitionPolicy& policy, double confidence, double alpha) {
    HurstTable t{alpha, std::vector<HurstRow>(assets.size())};
    parallel_for(assets.size(), [&](std::size_t i) {
        auto& row = t.rows[i];
        row.asset_id = assets[i].asset_id;
        row.period = period;
        if (!assets[i].returns) {
            row.error = assets[i].error;
            return;
        }
        const auto& r = *assets[i].returns;
        row.frequency = std::string(to_string(r.frequency));
        row.n = r.size();
        try {
            row.curve = rs_curve(r, policy);
            row.estimate = fit_hurst(row.curve, confidence);
            row.memory = classify(*row.estimate, alpha).kind;
        } catch (const std::exception& e) {
            row.error = describe_error(e);
        }
    });
    return t;
}

RollingTable build_rolling(const ReturnSeries& returns, std::size_t window, std::size_t step,
                           const PartitionPolicy& policy, double confidence) {
    return {returns.asset_id, std::string(to_string(returns.frequency)),
            rolling_hurst(returns, window, step, policy, confidence)};
}

CorrTable build_corr(const std::vector<PreparedAsset>& assets, std::string frequency, std::string period) {
    CorrTable t{std::move(frequency), std::move(period), {}};
    std::vector<ReturnSeries> good;
    std::vector<std::size_t> slot;  // index into `good`, or npos for failed assets
    constexpr auto npos = static_cast<std::size_t>(-1);
    for (const auto& a : assets) {
        t.matrix.asset_ids.push_back(a.asset_id);
        if (a.returns) {
            slot.push_back(good.size());
            good.push_back(*a.returns);
        } else {
            slot.push_back(npos);
        }
    }
    const std::size_t k = assets.size();
    t.matrix.cells.resize(k * k);

    CorrelationMatrix inner;
    std::string inner_error;
    if (good.size() >= 2) {
        inner = correlation_matrix(good);
    } else if (good.size() == 1) {
        // A lone series still has its diagonal cell.
        inner.asset_ids = {good[0].asset_id};
        CorrelationCell diag;
        diag.n = good[0].size();
        diag.value = Correlation{1.0, TestResult{std::numeric_limits<double>::infinity(), 0.0, Stars::S01,
                                                 static_cast<int>(diag.n) - 2}};
        inner.cells = {diag};
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            auto& cell = t.matrix.cells[i * k + j];
            if (slot[i] == npos || slot[j] == npos) {
                cell.error = slot[i] == npos ? assets[i].error : assets[j].error;
                continue;
            }
            cell = inner.at(slot[i], slot[j]);
        }
    }
    return t;
}

std::size_t failures(const StatsTable& t) noexcept {
    return static_cast<std::size_t>(std::count_if(t.rows.begin(), t.rows.end(), [](const auto& r) { return !r.error.empty(); }));
}

std::size_t failures(const AdfTable& t) noexcept {
    return static_cast<std::size_t>(std::count_if(t.rows.begin(), t.rows.end(), [](const auto& r) { return !r.error.empty(); }));
}

std::size_t failures(const HurstTable& t) noexcept {
    return static_cast<std::size_t>(std::count_if(t.rows.begin(), t.rows.end(), [](const auto& r) { return !r.error.empty(); }));
}

std::size_t failures(const CorrTable& t) noexcept {
    std::size_t bad = 0;
    const std::size_t k = t.matrix.dim();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!t.matrix.at(i, j).value) ++bad;
    return bad;
}

// ---- JSON -----------------------------------------------------------------

void to_json(json& j, const StatsTable& t) {
    j = json{{"table", "stats"}, {"frequency", t.frequency}, {"period", t.period}, {"rows", json::array()}};
    for (const auto& r : t.rows)
        j["rows"].push_back({{"asset", r.asset_id},
                             {"stats", opt(r.stats, describe_json)},
                             {"jarque_bera", opt(r.jb, test_json)},
                             {"error", r.error}});
}

void from_json(const json& j, StatsTable& t) {
    t.frequency = j.at("frequency").get<std::string>();
    t.period = j.at("period").get<std::string>();
    t.rows.clear();
    for (const auto& r : j.at("rows"))
        t.rows.push_back({r.at("asset").get<std::string>(), opt_from<DescriptiveStats>(r, "stats", describe_from),
                          opt_from<TestResult>(r, "jarque_bera", test_from), r.at("error").get<std::string>()});
}

void to_json(json& j, const AdfTable& t) {
    j = json{{"table", "adf"}, {"rows", json::array()}};
    for (const auto& r : t.rows)
        j["rows"].push_back({{"asset", r.asset_id},
                             {"frequency", r.frequency},
                             {"n", r.n},
                             {"adf", opt(r.result, test_json)},
                             {"error", r.error}});
}

void from_json(const json& j, AdfTable& t) {
    t.rows.clear();
    for (const auto& r : j.at("rows"))
        t.rows.push_back({r.at("asset").get<std::string>(), r.at("frequency").get<std::string>(),
                          r.at("n").get<std::size_t>(), opt_from<TestResult>(r, "adf", test_from),
                          r.at("error").get<std::string>()});
}

void to_json(json& j, const HurstTable& t) {
    j = json{{"table", "hurst"}, {"alpha", num(t.alpha)}, {"rows", json::array()}};
    for (const auto& r : t.rows) {
        json curve = json::array();
        for (const auto& p : r.curve.points)
            curve.push_back({{"n", p.n}, {"rs", num(p.rs)}, {"blocks", p.blocks}, {"skipped", p.skipped}});
        j["rows"].push_back({{"asset", r.asset_id},
                             {"frequency", r.frequency},
                             {"period", r.period},
                             {"n", r.n},
                             {"estimate", opt(r.estimate, estimate_json)},
                             {"class", opt(r.memory, [](MemoryKind k) { return json(std::string(to_string(k))); })},
                             {"curve", curve},
                             {"error", r.error}});
    }
}

void from_json(const json& j, HurstTable& t) {
    t.alpha = num(j.at("alpha"));
    t.rows.clear();
    for (const auto& r : j.at("rows")) {
        HurstRow row;
        row.asset_id = r.at("asset").get<std::string>();
        row.frequency = r.at("frequency").get<std::string>();
        row.period = r.at("period").get<std::string>();
        row.n = r.at("n").get<std::size_t>();
        row.estimate = opt_from<HurstEstimate>(r, "estimate", estimate_from);
        row.memory = opt_from<MemoryKind>(r, "class", [](const json& v) { return parse_memory(v.get<std::string>()); });
        for (const auto& p : r.at("curve"))
            row.curve.points.push_back({p.at("n").get<std::size_t>(), num(p.at("rs")), p.at("blocks").get<std::size_t>(),
                                        p.at("skipped").get<std::size_t>()});
        row.error = r.at("error").get<std::string>();
        t.rows.push_back(std::move(row));
    }
}

void to_json(json& j, const RollingTable& t) {
    j = json{{"table", "rolling"},
             {"asset", t.asset_id},
             {"frequency", t.frequency},
             {"window", t.rolling.window},
             {"step", t.rolling.step},
             {"points", json::array()}};
    for (const auto& p : t.rolling.points)
        j["points"].push_back({{"timestamp", format_timestamp(p.time)}, {"estimate", opt(p.estimate, estimate_json)}});
}

void from_json(const json& j, RollingTable& t) {
    t.asset_id = j.at("asset").get<std::string>();
    t.frequency = j.at("frequency").get<std::string>();
    t.rolling.window = j.at("window").get<std::size_t>();
    t.rolling.step = j.at("step").get<std::size_t>();
    t.rolling.points.clear();
    for (const auto& p : j.at("points")) {
        const auto stamp = p.at("timestamp").get<std::string>();
        const auto time = parse_timestamp(stamp);
        if (!time) throw Error(ErrorCode::InvalidArgument, "bad timestamp '" + stamp + "'");
        t.rolling.points.push_back({*time, opt_from<HurstEstimate>(p, "estimate", estimate_from)});
    }
}

void to_json(json& j, const CorrTable& t) {
    const std::size_t k = t.matrix.dim();
    j = json{{"table", "corr"}, {"frequency", t.frequency}, {"period", t.period}, {"assets", t.matrix.asset_ids}};
    json rows = json::array();
    for (std::size_t i = 0; i < k; ++i) {
        json row = json::array();
        for (std::size_t jj = 0; jj < k; ++jj) {
            const auto& c = t.matrix.at(i, jj);
            row.push_back({{"r", opt(c.value, [](const Correlation& v) { return num(v.r); })},
                           {"test", opt(c.value, [](const Correlation& v) { return test_json(v.test); })},
                           {"n", c.n},
                           {"error", c.error}});
        }
        rows.push_back(std::move(row));
    }
    j["cells"] = std::move(rows);
}

void from_json(const json& j, CorrTable& t) {
    t.frequency = j.at("frequency").get<std::string>();
    t.period = j.at("period").get<std::string>();
    t.matrix.asset_ids = j.at("assets").get<std::vector<std::string>>();
    t.matrix.cells.clear();
    for (const auto& row : j.at("cells")) {
        for (const auto& c : row) {
            CorrelationCell cell;
            if (!c.at("r").is_null()) cell.value = Correlation{num(c.at("r")), test_from(c.at("test"))};
            cell.n = c.at("n").get<std::size_t>();
            cell.error = c.at("error").get<std::string>();
            t.matrix.cells.push_back(std::move(cell));
        }
    }
}

}  // namespace fractalis::app
