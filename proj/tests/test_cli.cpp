#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fractalis/app/cli.hpp"
#include "fractalis/synth.hpp"

using namespace fractalis;
using namespace fractalis::app;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    args.insert(args.begin(), "fractalis");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("fractalis_test_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string fixture(const char* name) { return std::string(FRACTALIS_FIXTURE_DIR) + "/" + name; }

std::vector<std::string> fixture_inputs() {
    return {"--input", "BTC=" + fixture("btc.csv"),   "--input", "ETH=" + fixture("eth.csv"),
            "--input", "TSLA=" + fixture("tsla.csv"), "--input", "GOLD=" + fixture("gold.csv"),
            "--input", "SILVER=" + fixture("silver_15m.csv")};
}

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

std::string synth_file(const std::string& name, std::vector<std::string> extra) {
    const auto path = (scratch() / name).string();
    const auto r = cli(with({"synth", "--out", path}, extra));
    REQUIRE(r.code == 0);
    return path;
}

template <typename T>
T round_trip(const T& table) {
    return nlohmann::json::parse(render(table, OutputFormat::Json)).template get<T>();
}

}  // namespace

TEST_CASE("stats on one synthetic asset gives a header and one row") {
    const auto path = synth_file("one.csv", {"--n", "300", "--seed", "3"});
    const auto r = cli({"stats", "--input", "X=" + path});
    CHECK(r.code == 0);
    CHECK(line_count(r.out) == 3);
    CHECK(r.out.rfind("| Asset | N | Mean | Median | Std. | Max. | Min. | Skew. | Kurt. | J. Bera |", 0) == 0);
    CHECK(r.out.find("| X | 300 |") != std::string::npos);
}

TEST_CASE("fixture tables match the frozen goldens byte for byte") {
    const auto golden = [](const char* name) { return slurp(fs::path(FRACTALIS_GOLDEN_DIR) / name); };
    const auto stats = cli(with({"stats", "--freq", "1d"}, fixture_inputs()));
    CHECK(stats.code == 0);
    CHECK(stats.out == golden("stats_1d.md"));

    const auto adf = cli(with({"adf", "--freq", "1d"}, fixture_inputs()));
    CHECK(adf.code == 0);
    CHECK(adf.out == golden("adf_1d.md"));

    const auto corr = cli(with({"corr", "--freq", "1d", "--weekdays-only"}, fixture_inputs()));
    CHECK(corr.code == 0);
    CHECK(corr.out == golden("corr_weekdays_1d.md"));
}

TEST_CASE("usage errors exit with 2") {
    for (const char* cmd : {"stats", "adf", "hurst", "rolling", "corr", "report"}) {
        CAPTURE(cmd);
        CHECK(cli({cmd}).code == kExitUsage);
    }
    CHECK(cli({"nonsense", "--input", "A=x.csv"}).code == kExitUsage);
    CHECK(cli({"hurst", "--input", "A=" + fixture("btc.csv"), "--power", "4"}).code == kExitUsage);
    CHECK(cli({"hurst", "--input", "A=" + fixture("btc.csv"), "--freq", "2h"}).code == kExitUsage);
    CHECK(cli({"hurst", "--input", "A=" + fixture("btc.csv"), "--format", "xml"}).code == kExitUsage);
    CHECK(cli({"corr", "--input", "A=" + fixture("btc.csv")}).code == kExitUsage);
    CHECK(cli({"stats", "--input", "A=" + fixture("btc.csv"), "--input", "A=" + fixture("eth.csv")}).code ==
          kExitUsage);
}

TEST_CASE("per-asset failures are reported inline and make the exit code nonzero") {
    const auto r = cli({"stats", "--input", "BTC=" + fixture("btc.csv"), "--input", "NOPE=/nonexistent/file.csv"});
    CHECK(r.code == kExitFailure);
    CHECK(r.out.find("| BTC | 919 |") != std::string::npos);
    CHECK(r.out.find("| NOPE |") != std::string::npos);
    CHECK(r.err.find("Io") != std::string::npos);
}

TEST_CASE("adf lag override is respected") {
    const auto r = cli({"adf", "--input", "BTC=" + fixture("btc.csv"), "--lag", "3", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto t = nlohmann::json::parse(r.out).get<AdfTable>();
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].result->df_or_lag == 3);
}

TEST_CASE("hurst classifies a persistent fGn run and dumps one curve row per scale") {
    const auto persistent = synth_file("fgn07.csv", {"--kind", "fgn", "--hurst", "0.7", "--n", "8192", "--seed", "11"});
    const auto r = cli({"hurst", "--input", "P=" + persistent, "--alpha", "0.001", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto t = nlohmann::json::parse(r.out).get<HurstTable>();
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].memory == MemoryKind::Persistent);

    const auto white = synth_file("white.csv", {"--n", "2000", "--seed", "12"});
    const auto dump = (scratch() / "curve.csv").string();
    const auto w = cli({"hurst", "--input", "W=" + white, "--dump-curve", dump, "--format", "json"});
    REQUIRE(w.code == 0);
    const auto wt = nlohmann::json::parse(w.out).get<HurstTable>();
    const std::size_t k = wt.rows[0].estimate->k_points;
    CHECK(k == wt.rows[0].curve.points.size());
    CHECK(line_count(slurp(dump)) == k + 1);
}

TEST_CASE("hurst surfaces too few scales as a warning row") {
    const auto tiny = synth_file("tiny.csv", {"--n", "30", "--seed", "5"});
    const auto r = cli({"hurst", "--input", "T=" + tiny});
    CHECK(r.code == kExitFailure);
    CHECK(r.out.find("warning: TooFewScales") != std::string::npos);
}

TEST_CASE("rolling emits one row per window") {
    const auto r = cli({"rolling", "--input", "BTC=" + fixture("btc.csv")});
    CHECK(r.code == 0);
    CHECK(line_count(r.out) == 770 + 1);

    const auto single = cli({"rolling", "--input", "BTC=" + fixture("btc.csv"), "--window", "919"});
    CHECK(single.code == 0);
    CHECK(line_count(single.out) == 2);

    const auto too_long = cli({"rolling", "--input", "BTC=" + fixture("btc.csv"), "--window", "920"});
    CHECK(too_long.code == kExitFailure);
    CHECK(too_long.err.find("TooShort") != std::string::npos);

    CHECK(cli({"rolling", "--input", "A=" + fixture("btc.csv"), "--input", "B=" + fixture("eth.csv")}).code ==
          kExitUsage);
}

TEST_CASE("correlation of a series with itself is one off the diagonal") {
    const auto r = cli({"corr", "--input", "A=" + fixture("btc.csv"), "--input", "B=" + fixture("btc.csv")});
    CHECK(r.code == 0);
    CHECK(r.out.find("| B | 1.0000*** | 1 |") != std::string::npos);
}

TEST_CASE("permuting the inputs permutes the correlation matrix") {
    const auto a = cli(with({"corr", "--format", "json", "--weekdays-only", "--freq", "1d"}, fixture_inputs()));
    std::vector<std::string> reversed;
    const auto in = fixture_inputs();
    for (std::size_t i = in.size(); i >= 2; i -= 2) {
        reversed.push_back(in[i - 2]);
        reversed.push_back(in[i - 1]);
    }
    const auto b = cli(with({"corr", "--format", "json", "--weekdays-only", "--freq", "1d"}, reversed));
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    const auto ma = nlohmann::json::parse(a.out).get<CorrTable>().matrix;
    const auto mb = nlohmann::json::parse(b.out).get<CorrTable>().matrix;
    const std::size_t k = ma.dim();
    REQUIRE(mb.dim() == k);
    for (std::size_t i = 0; i < k; ++i) {
        CHECK(mb.asset_ids[k - 1 - i] == ma.asset_ids[i]);
        for (std::size_t j = 0; j < k; ++j) CHECK(mb.at(k - 1 - i, k - 1 - j) == ma.at(i, j));
    }
}

TEST_CASE("json output round-trips for every table type") {
    const auto inputs = fixture_inputs();
    const auto stats = nlohmann::json::parse(cli(with({"stats", "--format", "json"}, inputs)).out).get<StatsTable>();
    CHECK(round_trip(stats) == stats);
    const auto adf = nlohmann::json::parse(cli(with({"adf", "--format", "json"}, inputs)).out).get<AdfTable>();
    CHECK(round_trip(adf) == adf);
    const auto hurst = nlohmann::json::parse(cli(with({"hurst", "--format", "json"}, inputs)).out).get<HurstTable>();
    CHECK(round_trip(hurst) == hurst);
    const auto corr = nlohmann::json::parse(cli(with({"corr", "--format", "json", "--freq", "1d"}, inputs)).out).get<CorrTable>();
    CHECK(round_trip(corr) == corr);
    const auto rolling =
        nlohmann::json::parse(cli({"rolling", "--input", "BTC=" + fixture("btc.csv"), "--format", "json"}).out)
            .get<RollingTable>();
    CHECK(rolling.rolling.points.size() == 770);
    CHECK(round_trip(rolling) == rolling);

    // Rendering straight from the builders must round-trip too, including the
    // infinite statistic on the correlation diagonal.
    RunConfig c;
    c.inputs = {{"BTC", fixture("btc.csv")}, {"ETH", fixture("eth.csv")}};
    const auto prepared = prepare(load_inputs(c), c, std::nullopt, std::nullopt);
    const auto built = build_corr(prepared, "1d", "all");
    CHECK(std::isinf(built.matrix.at(0, 0).value->test.statistic));
    CHECK(round_trip(built) == built);
    const auto built_hurst = build_hurst(prepared, "all", {}, 0.99, 0.001);
    CHECK(round_trip(built_hurst) == built_hurst);
}

TEST_CASE("report writes the artifacts and a manifest and is deterministic") {
    const auto dir1 = (scratch() / "report1").string();
    const auto dir2 = (scratch() / "report2").string();
    const auto args = with({"report", "--split", "2022-07-01"}, fixture_inputs());
    const auto r1 = cli(with(args, {"--out", dir1}));
    const auto r2 = cli(with(args, {"--out", dir2}));
    CHECK(r1.code == 0);
    CHECK(r2.code == 0);

    const auto manifest = nlohmann::json::parse(slurp(fs::path(dir1) / "manifest.json"));
    CHECK(manifest.at("version") == std::string(kVersion));
    CHECK(manifest.at("status") == "ok");
    CHECK(manifest.at("artifacts").size() >= 6);
    for (const auto& a : manifest.at("artifacts")) {
        const auto name = a.at("path").get<std::string>();
        CAPTURE(name);
        CHECK(fs::exists(fs::path(dir1) / name));
        CHECK(slurp(fs::path(dir1) / name) == slurp(fs::path(dir2) / name));
    }
    CHECK(slurp(fs::path(dir1) / "manifest.json") == slurp(fs::path(dir2) / "manifest.json"));
}

TEST_CASE("report records a missing input in the manifest and fails") {
    const auto dir = (scratch() / "report_missing").string();
    const auto r = cli({"report", "--input", "BTC=" + fixture("btc.csv"), "--input", "GONE=/nonexistent/gone.csv",
                        "--out", dir});
    CHECK(r.code == kExitFailure);
    const auto manifest = nlohmann::json::parse(slurp(fs::path(dir) / "manifest.json"));
    CHECK(manifest.at("status") == "failed");
    bool saw_failure = false;
    for (const auto& a : manifest.at("artifacts"))
        if (a.at("status") == "failed") saw_failure = true;
    CHECK(saw_failure);
    CHECK(fs::exists(fs::path(dir) / "stats_1d.md"));
}

TEST_CASE("power 17 on raw fGn keeps the scale grid") {
    const auto path = synth_file("raw_fgn.csv", {"--kind", "fgn", "--hurst", "0.6", "--n", "4096", "--seed", "21",
                                                 "--sigma", "0.01", "--scale", "raw"});
    const auto plain = cli({"hurst", "--input", "R=" + path, "--scale", "raw", "--format", "json"});
    const auto powered = cli({"hurst", "--input", "R=" + path, "--scale", "raw", "--power", "17", "--format", "json"});
    REQUIRE(plain.code == 0);
    REQUIRE(powered.code == 0);
    const auto a = nlohmann::json::parse(plain.out).get<HurstTable>();
    const auto b = nlohmann::json::parse(powered.out).get<HurstTable>();
    REQUIRE(a.rows[0].estimate);
    REQUIRE(b.rows[0].estimate);
    REQUIRE(a.rows[0].curve.points.size() == b.rows[0].curve.points.size());
    for (std::size_t i = 0; i < a.rows[0].curve.points.size(); ++i)
        CHECK(a.rows[0].curve.points[i].n == b.rows[0].curve.points[i].n);
}

TEST_CASE("config file values apply and flags override them") {
    const auto cfg = scratch() / "run.cfg";
    std::ofstream(cfg) << "# comment\ninput = \"BTC=" << fixture("btc.csv") << "\"\nwindow = 900\nformat = csv\n";
    const auto from_file = cli({"rolling", "--config", cfg.string()});
    CHECK(from_file.code == 0);
    CHECK(line_count(from_file.out) == 20 + 1);
    const auto overridden = cli({"rolling", "--config", cfg.string(), "--window", "910"});
    CHECK(overridden.code == 0);
    CHECK(line_count(overridden.out) == 10 + 1);
}

TEST_CASE("synth output flows back through ingest unchanged") {
    const auto path = synth_file("round.csv", {"--kind", "fgn", "--hurst", "0.3", "--n", "500", "--seed", "9",
                                               "--weekdays-only", "--from", "2021-01-04"});
    const auto prices = load_price_csv(path, CsvSchema{"R", "timestamp", "open", std::nullopt});
    CHECK(prices.size() == 501);
    CHECK(prices.points.front().time == make_date(2021, 1, 4));
    for (const auto& p : prices.points) CHECK(is_weekday(p.time));

    SynthSpec spec;
    spec.kind = SynthKind::FGN;
    spec.n = 500;
    spec.h = 0.3;
    spec.seed = 9;
    spec.scale = ReturnScale::Percent;
    const auto expected = generate(spec).values();
    const auto back = prices;
    std::vector<double> got;
    for (std::size_t i = 1; i < back.size(); ++i)
        got.push_back(100.0 * std::log(back.points[i].price / back.points[i - 1].price));
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-9));
}

TEST_CASE("the installed binary runs as a separate process") {
    const std::string bin = FRACTALIS_BINARY;
    CHECK(std::system((bin + " --version > /dev/null").c_str()) == 0);
    const int status = std::system((bin + " stats > /dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(status) == kExitUsage);
}
