#include "fractalis/app/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "CLI11.hpp"
#include "fractalis/error.hpp"
#include "fractalis/parallel.hpp"
#include "fractalis/returns.hpp"

namespace fractalis::app {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string frequency_label(const PreparedAsset& a, std::optional<Frequency> requested) {
    if (a.returns) return std::string(to_string(a.returns->frequency));
    return requested ? std::string(to_string(*requested)) : "";
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::Io, "cannot write " + path.string());
    os << text;
    if (!os) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

void report_failures(std::ostream& err, const std::vector<std::string>& errors) {
    for (const auto& e : errors) err << "fractalis: " << e << '\n';
}

std::optional<Frequency> single_frequency(const RunConfig& c, const char* command) {
    if (c.frequencies.size() > 1) throw UsageError(std::string(command) + " accepts a single --freq");
    if (c.frequencies.empty()) return std::nullopt;
    return c.frequencies.front();
}

void require_inputs(const RunConfig& c, std::size_t minimum = 1) {
    if (c.inputs.size() < minimum)
        throw UsageError(c.command + " needs at least " + std::to_string(minimum) + " --input binding" +
                         (minimum > 1 ? "s" : ""));
}

std::vector<std::optional<Frequency>> frequency_sweep(const RunConfig& c) {
    if (c.frequencies.empty()) return {std::nullopt};
    return {c.frequencies.begin(), c.frequencies.end()};
}

HurstTable hurst_over(const std::vector<LoadedAsset>& loaded, const RunConfig& c,
                      const std::vector<std::optional<Frequency>>& frequencies,
                      const std::optional<PeriodSpec>& period) {
    HurstTable all{c.alpha, {}};
    for (const auto& f : frequencies) {
        const auto prepared = prepare(loaded, c, f, period);
        auto t = build_hurst(prepared, period_label(period), c.policy, c.confidence, c.alpha);
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            if (t.rows[i].frequency.empty()) t.rows[i].frequency = frequency_label(prepared[i], f);
        all.rows.insert(all.rows.end(), t.rows.begin(), t.rows.end());
    }
    return all;
}

std::vector<std::string> row_errors(const auto& table) {
    std::vector<std::string> out;
    for (const auto& r : table.rows)
        if (!r.error.empty()) out.push_back(r.asset_id + ": " + r.error);
    return out;
}

std::vector<std::string> row_errors(const CorrTable& t) {
    std::vector<std::string> out;
    const auto& m = t.matrix;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!m.at(i, j).value) out.push_back(m.asset_ids[i] + "/" + m.asset_ids[j] + ": " + m.at(i, j).error);
    return out;
}

json config_json(const RunConfig& c) {
    json inputs = json::array();
    for (const auto& b : c.inputs) inputs.push_back({{"asset", b.asset_id}, {"path", b.path}});
    json freqs = json::array();
    for (auto f : c.frequencies) freqs.push_back(std::string(to_string(f)));
    const auto stamp = [](const std::optional<Timestamp>& t) { return t ? json(format_timestamp(*t)) : json(nullptr); };
    return {{"inputs", inputs},
            {"frequencies", freqs},
            {"from", stamp(c.from)},
            {"to_exclusive", stamp(c.to)},
            {"split", stamp(c.split)},
            {"weekdays_only", c.weekdays_only},
            {"power", c.power ? json(*c.power) : json(nullptr)},
            {"scale", std::string(to_string(c.scale))},
            {"policy",
             {{"kind", std::string(to_string(c.policy.kind))},
              {"include_full", c.policy.include_full},
              {"min_length", c.policy.min_length}}},
            {"confidence", c.confidence},
            {"alpha", c.alpha},
            {"window", c.window},
            {"step", c.step},
            {"lag", c.lag ? json(*c.lag) : json(nullptr)},
            {"format", c.format ? json(std::string(to_string(*c.format))) : json(nullptr)},
            {"seed", c.seed}};
}

}  // namespace

std::vector<LoadedAsset> load_inputs(const RunConfig& config) {
    std::vector<LoadedAsset> out(config.inputs.size());
    parallel_for(out.size(), [&](std::size_t i) {
        const auto& b = config.inputs[i];
        out[i].asset_id = b.asset_id;
        try {
            CsvSchema schema;
            schema.asset_id = b.asset_id;
            out[i].prices = load_price_csv(b.path, schema);
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    });
    return out;
}

std::vector<PreparedAsset> prepare(const std::vector<LoadedAsset>& loaded, const RunConfig& config,
                                   std::optional<Frequency> frequency, const std::optional<PeriodSpec>& period) {
    std::vector<PreparedAsset> out(loaded.size());
    parallel_for(out.size(), [&](std::size_t i) {
        out[i].asset_id = loaded[i].asset_id;
        if (!loaded[i].prices) {
            out[i].error = loaded[i].error;
            return;
        }
        try {
            PriceSeries prices = frequency ? resample(*loaded[i].prices, *frequency) : *loaded[i].prices;
            if (config.weekdays_only) prices = filter_weekdays(prices);
            if (period) prices = slice_period(prices, *period);
            ReturnSeries r = log_returns(prices, config.scale);
            if (config.power) r = power_transform(r, *config.power);
            out[i].returns = std::move(r);
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    });
    return out;
}

std::string period_label(const std::optional<PeriodSpec>& period) {
    if (!period) return "all";
    const bool open_start = period->start == Timestamp::min();
    const bool open_end = period->end == Timestamp::max();
    const std::string a = open_start ? "start" : format_date(period->start);
    const std::string b = open_end ? "end" : format_date(period->end - std::chrono::milliseconds{1});
    return a + ".." + b;
}

int cmd_stats(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_inputs(c);
    const auto f = single_frequency(c, "stats");
    const auto period = c.period();
    const auto prepared = prepare(load_inputs(c), c, f, period);
    std::string freq_label = f ? std::string(to_string(*f)) : "native";
    const auto t = build_stats(prepared, std::move(freq_label), period_label(period));
    out << render(t, c.format_or(OutputFormat::Markdown));
    report_failures(err, row_errors(t));
    return failures(t) ? kExitFailure : kExitOk;
}

int cmd_adf(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_inputs(c);
    const auto loaded = load_inputs(c);
    const auto period = c.period();
    AdfTable all;
    for (const auto& f : frequency_sweep(c)) {
        const auto prepared = prepare(loaded, c, f, period);
        auto t = build_adf(prepared, c.lag);
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            if (t.rows[i].frequency.empty()) t.rows[i].frequency = frequency_label(prepared[i], f);
        all.rows.insert(all.rows.end(), t.rows.begin(), t.rows.end());
    }
    out << render(all, c.format_or(OutputFormat::Markdown));
    report_failures(err, row_errors(all));
    return failures(all) ? kExitFailure : kExitOk;
}

int cmd_hurst(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_inputs(c);
    const auto t = hurst_over(load_inputs(c), c, frequency_sweep(c), c.period());
    out << render(t, c.format_or(OutputFormat::Markdown));
    if (!c.dump_curve.empty()) write_file(c.dump_curve, render_curve_dump(t));
    report_failures(err, row_errors(t));
    return failures(t) ? kExitFailure : kExitOk;
}

int cmd_rolling(const RunConfig& c, std::ostream& out, std::ostream& err) {
    if (c.inputs.size() != 1) throw UsageError("rolling needs exactly one --input binding");
    const auto f = single_frequency(c, "rolling");
    const auto prepared = prepare(load_inputs(c), c, f, c.period());
    if (!prepared[0].returns) {
        report_failures(err, {prepared[0].asset_id + ": " + prepared[0].error});
        return kExitFailure;
    }
    const auto t = build_rolling(*prepared[0].returns, c.window, c.step, c.policy, c.confidence);
    out << render(t, c.format_or(OutputFormat::Csv));
    return kExitOk;
}

int cmd_corr(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_inputs(c, 2);
    const auto f = single_frequency(c, "corr");
    const auto period = c.period();
    const auto prepared = prepare(load_inputs(c), c, f, period);
    std::string freq_label = f ? std::string(to_string(*f)) : "native";
    const auto t = build_corr(prepared, std::move(freq_label), period_label(period));
    out << render(t, c.format_or(OutputFormat::Markdown));
    report_failures(err, row_errors(t));
    return failures(t) ? kExitFailure : kExitOk;
}

int cmd_synth(const RunConfig& c, std::ostream& out, std::ostream&) {
    const auto f = single_frequency(c, "synth").value_or(Frequency::Day1);
    SynthSpec spec;
    spec.kind = c.synth.kind;
    spec.n = c.synth.n;
    spec.h = c.synth.hurst;
    spec.sigma = c.synth.sigma;
    spec.seed = c.seed;
    spec.asset_id = c.synth.asset_id;
    spec.frequency = f;
    if (c.from) spec.start = *c.from;
    spec.weekdays_only = c.weekdays_only;
    spec.scale = c.scale;
    if (!(c.synth.p0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "--p0 must be positive");

    // One extra calendar slot so the starting price sits on the first
    // trading timestamp and every return lands on the next one.
    const auto calendar = make_calendar(spec.start, spec.n + 1, f, spec.weekdays_only);
    ReturnSeries returns = generate(spec);
    for (std::size_t i = 0; i < returns.points.size(); ++i) returns.points[i].time = calendar[i + 1];
    const PriceSeries prices = random_walk_prices(returns, c.synth.p0, calendar.front());

    if (c.synth.out.empty()) {
        write_price_csv(out, prices);
    } else {
        std::ofstream os(c.synth.out, std::ios::binary);
        if (!os) throw Error(ErrorCode::Io, "cannot write " + c.synth.out);
        write_price_csv(os, prices);
    }
    return kExitOk;
}

int cmd_report(const RunConfig& c, std::ostream& out, std::ostream& err) {
    require_inputs(c);
    if (c.out.empty()) throw UsageError("report needs --out DIR");
    const fs::path dir(c.out);
    fs::create_directories(dir);

    const auto loaded = load_inputs(c);
    const OutputFormat table_format = c.format_or(OutputFormat::Markdown);
    const OutputFormat rolling_format = c.format_or(OutputFormat::Csv) == OutputFormat::Json ? OutputFormat::Json
                                                                                                : OutputFormat::Csv;

    // Native frequency and coarser, unless frequencies were given.
    std::vector<Frequency> sweep = c.frequencies;
    if (sweep.empty()) {
        std::optional<Frequency> finest;
        for (const auto& a : loaded)
            if (a.prices && (!finest || frequency_step(a.prices->frequency) < frequency_step(*finest)))
                finest = a.prices->frequency;
        for (auto f : {Frequency::Min15, Frequency::Hour1, Frequency::Day1})
            if (!finest || frequency_step(f) >= frequency_step(*finest)) sweep.push_back(f);
        if (!finest) sweep = {Frequency::Day1};
    }

    struct Period {
        std::string tag;
        std::optional<PeriodSpec> spec;
    };
    std::vector<Period> periods{{"full", c.period()}};
    if (c.split) {
        periods.push_back({"p1", PeriodSpec(c.from.value_or(Timestamp::min()), *c.split)});
        periods.push_back({"p2", PeriodSpec(*c.split, c.to.value_or(Timestamp::max()))});
    }

    json artifacts = json::array();
    std::size_t failed_tables = 0;
    const auto record = [&](std::string kind, const std::string& freq, const std::string& period, const std::string& name,
                            const std::string& text, std::vector<std::string> errors) {
        write_file(dir / name, text);
        if (!errors.empty()) ++failed_tables;
        artifacts.push_back({{"kind", std::move(kind)},
                             {"frequency", freq},
                             {"period", period},
                             {"path", name},
                             {"status", errors.empty() ? "ok" : "failed"},
                             {"errors", errors}});
        out << name << (errors.empty() ? "" : " (failed)") << '\n';
        report_failures(err, errors);
    };
    const std::string ext(extension(table_format));

    for (const auto f : sweep) {
        const std::string fl(to_string(f));
        // Assets recorded at a coarser frequency than f cannot take part.
        std::vector<LoadedAsset> members;
        for (const auto& a : loaded)
            if (!a.prices || frequency_step(a.prices->frequency) <= frequency_step(f)) members.push_back(a);
        if (members.empty()) continue;

        const auto full = prepare(members, c, f, periods.front().spec);
        const auto stats = build_stats(full, fl, period_label(periods.front().spec));
        record("stats", fl, stats.period, "stats_" + fl + "." + ext, render(stats, table_format), row_errors(stats));
        const auto adf = build_adf(full, c.lag);
        record("adf", fl, stats.period, "adf_" + fl + "." + ext, render(adf, table_format), row_errors(adf));

        for (const auto& p : periods) {
            const auto prepared = p.tag == "full" ? full : prepare(members, c, f, p.spec);
            const std::string label = period_label(p.spec);
            auto hurst = build_hurst(prepared, label, c.policy, c.confidence, c.alpha);
            for (std::size_t i = 0; i < hurst.rows.size(); ++i)
                if (hurst.rows[i].frequency.empty()) hurst.rows[i].frequency = fl;
            const std::string stem = fl + "_" + p.tag;
            record("hurst", fl, label, "hurst_" + stem + "." + ext, render(hurst, table_format), row_errors(hurst));
            record("curve", fl, label, "curve_" + stem + ".csv", render_curve_dump(hurst), {});
            if (prepared.size() >= 2) {
                const auto corr = build_corr(prepared, fl, label);
                record("corr", fl, label, "corr_" + stem + "." + ext, render(corr, table_format), row_errors(corr));
            }
        }
    }

    // Rolling estimates at the coarsest swept frequency over the full period.
    const Frequency roll_f = *std::max_element(sweep.begin(), sweep.end(), [](Frequency a, Frequency b) {
        return frequency_step(a) < frequency_step(b);
    });
    const std::string rl(to_string(roll_f));
    const auto roll_assets = prepare(loaded, c, roll_f, periods.front().spec);
    for (const auto& a : roll_assets) {
        const std::string name = "rolling_" + a.asset_id + "_" + rl + "." + std::string(extension(rolling_format));
        if (!a.returns) {
            record("rolling", rl, period_label(periods.front().spec), name, "", {a.asset_id + ": " + a.error});
            continue;
        }
        try {
            const auto t = build_rolling(*a.returns, c.window, c.step, c.policy, c.confidence);
            record("rolling", rl, period_label(periods.front().spec), name, render(t, rolling_format), {});
        } catch (const std::exception& e) {
            record("rolling", rl, period_label(periods.front().spec), name, "", {a.asset_id + ": " + e.what()});
        }
    }

    const json manifest{{"tool", "fractalis"},
                        {"version", std::string(kVersion)},
                        {"config", config_json(c)},
                        {"artifacts", artifacts},
                        {"status", failed_tables ? "failed" : "ok"}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    out << "manifest.json\n";
    return failed_tables ? kExitFailure : kExitOk;
}

namespace {

Timestamp parse_time_flag(const std::string& text, const char* flag) {
    const auto t = parse_timestamp(text);
    if (!t) throw UsageError(std::string(flag) + ": cannot parse '" + text + "' as a date or time");
    return *t;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rescaled-range long-memory analysis of asset price series", "fractalis"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "Flat key = value file; command-line flags win");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    RunConfig c;
    std::vector<std::string> inputs, freqs;
    std::string from, to, split, scale = "percent", policy = "halving", format, kind = "white";
    std::optional<int> power, lag;
    bool exclude_full = false;

    app.add_option("command", c.command, "stats | adf | hurst | rolling | corr | synth | report")->required();
    app.add_option("--input", inputs, "asset=path binding (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    app.add_option("--freq", freqs, "15m, 1h or 1d (repeatable)")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    app.add_option("--from", from, "Start date or time (inclusive)");
    app.add_option("--to", to, "End date (inclusive) or time (inclusive)");
    app.add_option("--split", split, "report: also analyse [from, split) and [split, to)");
    app.add_flag("--weekdays-only", c.weekdays_only, "Drop Saturday and Sunday observations");
    app.add_option("--power", power, "Odd exponent applied to returns");
    app.add_option("--scale", scale, "percent or raw log returns");
    app.add_option("--policy", policy, "halving or harmonic block lengths");
    app.add_flag("--exclude-full", exclude_full, "Leave out the single full-length block");
    app.add_option("--min-length", c.policy.min_length, "Smallest block length");
    app.add_option("--confidence", c.confidence, "Confidence level of the Hurst interval");
    app.add_option("--alpha", c.alpha, "Significance level for the memory classification");
    app.add_option("--window", c.window, "Rolling window length in returns");
    app.add_option("--step", c.step, "Rolling window step");
    app.add_option("--lag", lag, "ADF lag override");
    app.add_option("--format", format, "csv, md or json");
    app.add_option("--seed", c.seed, "Seed for synth");
    app.add_option("--dump-curve", c.dump_curve, "hurst: write log-log curve, fit and band to this CSV");
    app.add_option("--out", c.out, "report: output directory; synth: output file");
    app.add_option("--kind", kind, "synth: white or fgn");
    app.add_option("--n", c.synth.n, "synth: number of returns");
    app.add_option("--hurst", c.synth.hurst, "synth: Hurst exponent of fgn");
    app.add_option("--sigma", c.synth.sigma, "synth: return standard deviation");
    app.add_option("--p0", c.synth.p0, "synth: starting price");
    app.add_option("--asset", c.synth.asset_id, "synth: asset id");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        for (const auto& b : inputs) c.inputs.push_back(parse_binding(b));
        for (const auto& f : freqs) {
            const auto parsed = parse_frequency(f);
            if (!parsed) throw UsageError("--freq: unknown frequency '" + f + "'");
            c.frequencies.push_back(*parsed);
        }
        if (!from.empty()) c.from = parse_time_flag(from, "--from");
        if (!to.empty()) {
            // A bare date covers the whole day.
            c.to = parse_time_flag(to, "--to") +
                   (to.size() == 10 ? std::chrono::milliseconds{std::chrono::days{1}} : std::chrono::milliseconds{1});
        }
        if (!split.empty()) c.split = parse_time_flag(split, "--split");
        c.power = power;
        c.lag = lag;
        if (scale == "percent") c.scale = ReturnScale::Percent;
        else if (scale == "raw") c.scale = ReturnScale::Raw;
        else throw UsageError("--scale must be percent or raw");
        const auto pk = parse_partition_kind(policy);
        if (!pk) throw UsageError("--policy must be halving or harmonic");
        c.policy.kind = *pk;
        c.policy.include_full = !exclude_full;
        if (!format.empty()) {
            c.format = parse_output_format(format);
            if (!c.format) throw UsageError("--format must be csv, md or json");
        }
        if (kind == "white") c.synth.kind = SynthKind::WhiteNoise;
        else if (kind == "fgn") c.synth.kind = SynthKind::FGN;
        else throw UsageError("--kind must be white or fgn");
        c.synth.out = c.command == "synth" ? c.out : "";
        validate(c);
    } catch (const std::exception& e) {
        err << "fractalis: " << e.what() << '\n';
        return kExitUsage;
    }

    static const std::map<std::string, int (*)(const RunConfig&, std::ostream&, std::ostream&)> commands{
        {"stats", cmd_stats}, {"adf", cmd_adf},     {"hurst", cmd_hurst},   {"rolling", cmd_rolling},
        {"corr", cmd_corr},   {"synth", cmd_synth}, {"report", cmd_report},
    };
    const auto it = commands.find(c.command);
    if (it == commands.end()) {
        err << "fractalis: unknown command '" << c.command << "'\n" << app.help();
        return kExitUsage;
    }
    try {
        return it->second(c, out, err);
    } catch (const UsageError& e) {
        err << "fractalis: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "fractalis: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace fractalis::app
