#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rvf/cli/commands.hpp"
#include "rvf/econometric/garch.hpp"

namespace fs = std::filesystem;
using namespace rvf;
using namespace rvf::cli;

namespace {

const fs::path kSource = RVF_SOURCE_DIR;
const std::string kCli = RVF_CLI_PATH;

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("rvf_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write(const fs::path& p, const std::string& s) {
    std::ofstream(p, std::ios::binary) << s;
    return p;
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

RunConfig config(const std::string& json) { return parse_config(nlohmann::json::parse(json), kSource / "data"); }

struct Run {
    int code;
    std::string err;
};

Run run_cli(const std::string& args, const fs::path& dir) {
    const auto err = dir / "stderr.txt";
    const int status = std::system((kCli + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " + err.string()).c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

} // namespace

TEST_CASE("backtest smoke run on the bundled sample", "[cli]") {
    const auto out = scratch("smoke");
    const auto before = slurp(kSource / "data/sample_daily.csv");
    const auto cfg = config(R"({"data": "sample_daily.csv", "window_size": 250, "models": ["har"], "horizons": [1]})");
    std::ostringstream console;
    CHECK(cmd_backtest(cfg, out, console) == 0);
    CHECK(fs::exists(out / "forecasts/har_1.csv"));
    CHECK(fs::exists(out / "losses.csv"));
    CHECK(fs::exists(out / "meta.json"));
    CHECK(fs::exists(out / "losses.json"));
    CHECK(slurp(kSource / "data/sample_daily.csv") == before);

    const auto meta = nlohmann::json::parse(slurp(out / "meta.json"));
    CHECK(meta.at("window_size") == 250);
    CHECK(meta.at("models").at(0).at("refit_every") == 1);
    CHECK(meta.at("notes").dump().find("1688") != std::string::npos);
    // 400 returns, window 250, h = 1
    CHECK(count(slurp(out / "forecasts/har_1.csv"), "\n") == 1 + 150);
}

TEST_CASE("config is strict", "[cli][config]") {
    try {
        config(R"({"data": "sample_daily.csv", "windoww": 250})");
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("'windoww'") != std::string::npos);
    }
    CHECK_THROWS_WITH(config(R"({"data": "sample_daily.csv", "models": ["arima"]})"),
                      Catch::Matchers::ContainsSubstring("rnn, lstm, gru, garch, rgarch, har"));
    CHECK_THROWS_WITH(config(R"({"data": "sample_daily.csv", "models": [{"name": "gru", "units": 3}]})"),
                      Catch::Matchers::ContainsSubstring("'units'"));
    CHECK_THROWS_AS(config(R"({"data": "missing.csv"})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"data": "sample_daily.csv", "window_size": 100, "train_fraction": 0.7})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"data": "sample_daily.csv", "horizons": [0]})"), ConfigError);
    CHECK_THROWS_AS(config(R"({"data": "sample_daily.csv", "frequency": "weekly"})"), ConfigError);
    CHECK(config(R"({"data": "sample_daily.csv", "train_fraction": 0.7})").window_for(1000) == 700);
}

TEST_CASE("config defaults follow the reference settings", "[cli][config]") {
    const auto cfg = config(R"({"data": "sample_daily.csv"})");
    CHECK(cfg.window_for(5776) == 4077);
    CHECK(config(R"({"data": "sample_minute.csv", "frequency": "hourly"})").window_for(1641) == 1149);
    REQUIRE(cfg.models.size() == 6);
    for (const auto& m : cfg.models) {
        if (!backtest::is_neural(m.kind)) {
            CHECK(m.cadence() == 1);
            continue;
        }
        const auto& a = m.neural.architecture;
        const auto& c = m.neural.config;
        CHECK(m.neural.sequence_length == 12);
        CHECK(c.learning_rate == 1e-4);
        CHECK(a.dropout_rate == 0.2);
        CHECK(m.cadence() == 20);
        if (m.kind == backtest::ModelKind::gru) {
            CHECK(a.hidden_units == 16);
            CHECK(a.dense_units == 4);
            CHECK(c.epochs == 50);
            CHECK(c.batch_size == 64);
        } else if (m.kind == backtest::ModelKind::lstm) {
            CHECK(a.hidden_units == 8);
            CHECK(c.epochs == 50);
            CHECK(c.batch_size == 16);
        } else {
            CHECK(c.epochs == 30);
        }
    }
}

TEST_CASE("backtest output is byte-identical across runs", "[cli][determinism]") {
    const auto cfg = config(R"({"data": "sample_daily.csv", "window_size": 300, "horizons": [1, 4], "seed": 7,
        "models": ["har", "garch", {"name": "lstm", "epochs": 3, "refit_every": 40}]})");
    const auto a = scratch("det_a"), b = scratch("det_b");
    std::ostringstream sink;
    cmd_backtest(cfg, a, sink);
    cmd_backtest(cfg, b, sink);
    CHECK(slurp(a / "losses.csv") == slurp(b / "losses.csv"));
    CHECK(slurp(a / "forecasts/lstm_4.csv") == slurp(b / "forecasts/lstm_4.csv"));
    CHECK(slurp(a / "meta.json") == slurp(b / "meta.json"));
}

TEST_CASE("command-line errors are single lines with nonzero exit", "[cli][process]") {
    const auto dir = scratch("errors");
    std::string csv = "timestamp,price\n";
    for (int d = 1; d <= 20; ++d) csv += "2020-01-" + std::string(d < 10 ? "0" : "") + std::to_string(d) + (d == 6 ? ",abc\n" : ",100\n");
    write(dir / "bad.csv", csv);
    write(dir / "bad.json", R"({"data": "bad.csv"})");
    auto r = run_cli("summarize --config " + (dir / "bad.json").string() + " --out " + (dir / "o").string(), dir);
    CHECK(r.code != 0);
    CHECK(r.err.find("line 7") != std::string::npos);
    CHECK(count(r.err, "\n") == 1);

    write(dir / "typo.json", R"({"data": ")" + (kSource / "data/sample_daily.csv").string() + R"(", "windoww": 3})");
    r = run_cli("backtest --config " + (dir / "typo.json").string() + " --out " + (dir / "o").string(), dir);
    CHECK(r.code != 0);
    CHECK(r.err.find("windoww") != std::string::npos);

    r = run_cli("plot --out " + (dir / "nothing").string(), dir);
    CHECK(r.code != 0);

    r = run_cli("backtest --config " + (kSource / "data/sample_hourly.json").string() + " --out " + (dir / "h").string() +
                    " --seed 3",
                dir);
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "h/forecasts/har_3.csv"));
    CHECK(nlohmann::json::parse(slurp(dir / "h/meta.json")).at("seed") == 3);
    CHECK(slurp(dir / "h/losses.csv").rfind("loss,model,1h,3h\n", 0) == 0);
}

TEST_CASE("summarize", "[cli]") {
    const auto dir = scratch("summary");
    rvf::CounterRng rng(2718);
    std::normal_distribution<double> z(0.0, 0.01);
    std::string csv = "timestamp,price\n";
    double p = 100.0;
    const auto days = econometric::synthetic_days(1001);
    for (std::size_t i = 0; i < days.size(); ++i) {
        if (i > 0) p *= std::exp(z(rng));
        csv += format_timestamp(days[i]) + "," + format_double(p) + "\n";
    }
    write(dir / "normal.csv", csv);
    RunConfig cfg;
    cfg.data = dir / "normal.csv";
    std::ostringstream console;
    CHECK(cmd_summarize(cfg, dir, console) == 0);
    std::istringstream in(slurp(dir / "summary.csv"));
    std::string header, ret, rv;
    std::getline(in, header);
    std::getline(in, ret);
    std::getline(in, rv);
    CHECK(header == "series,obs,mean,sd,min,max,skew,kurt,jb_pvalue,lb_pvalue,adf_stat,arch_lm_pvalue,adf_decision");
    CHECK(ret.rfind("return,1000,", 0) == 0);
    CHECK(rv.rfind("rv,1000,", 0) == 0);
    std::vector<std::string> fields;
    std::stringstream ss(ret);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    CHECK(std::stod(fields[8]) > 0.01);
    CHECK(console.str().find("J-B p") != std::string::npos);
}

TEST_CASE("plots", "[cli][plot]") {
    const auto dir = scratch("plot");
    fs::create_directories(dir / "forecasts");
    std::string csv = "timestamp,predicted,actual,fit_begin,fit_end\n";
    for (int i = 0; i < 10; ++i)
        csv += "2020-02-" + std::string(i < 9 ? "0" : "") + std::to_string(i + 1) + "," + std::to_string(1e-4 * (1 + i % 3)) + "," +
               std::to_string(1e-4 * (1 + i % 4)) + ",2019-01-01,2020-01-31\n";
    write(dir / "forecasts/har_1.csv", csv);

    std::string losses = "loss,model,1d,2d,3d,4d,5d,6d,7d,14d,30d,60d,90d\n";
    for (const char* fam : {"mse", "qlike_canonical"})
        for (const char* m : {"rnn", "lstm", "gru", "garch", "har"}) {
            losses += std::string(fam) + "," + m;
            for (int h = 0; h < 11; ++h) losses += "," + std::to_string(0.001 * (h + 1) * (m[0] + 1));
            losses += "\n";
        }
    write(dir / "losses.csv", losses);

    std::ostringstream console;
    REQUIRE(cmd_plot(dir, console) == 0);
    const auto fc = slurp(dir / "plots/har_1.svg");
    CHECK(count(fc, "<polyline") == 2);
    CHECK(fc.rfind("<svg", 0) == 0);
    CHECK(fc.find("</svg>") != std::string::npos);
    const auto trend = slurp(dir / "plots/trend_qlike_canonical.svg");
    CHECK(count(trend, "<polyline") == 5);
    // 11 points per series
    const auto first = trend.find("points=\"");
    CHECK(count(trend.substr(first, trend.find('"', first + 8) - first), ",") == 11);

    const auto copy = scratch("plot_copy");
    fs::copy(dir / "forecasts", copy / "forecasts");
    fs::copy_file(dir / "losses.csv", copy / "losses.csv");
    cmd_plot(copy, console);
    for (const auto& f : {"har_1.svg", "trend_mse.svg", "trend_qlike_canonical.svg"})
        CHECK(slurp(dir / "plots" / f) == slurp(copy / "plots" / f));

    write(dir / "forecasts/empty_1.csv", "timestamp,predicted,actual,fit_begin,fit_end\n");
    CHECK_THROWS_WITH(cmd_plot(dir, console), Catch::Matchers::ContainsSubstring("no records"));
}
