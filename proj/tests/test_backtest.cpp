#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "rvf/backtest/report.hpp"
#include "rvf/econometric/har.hpp"

using namespace rvf;
using namespace rvf::backtest;
using Catch::Approx;

namespace {

RvSeries make_rv(std::vector<double> v) {
    RvSeries s;
    s.timestamps = econometric::synthetic_days(v.size());
    s.values = std::move(v);
    s.frequency = Frequency::daily;
    return s;
}

/// Predicts the window mean and remembers what it was shown.
struct Spy final : Forecaster {
    const double* base = nullptr;
    std::size_t fits = 0;
    std::vector<std::pair<std::size_t, std::size_t>> seen; // [begin, end) offsets of forecast windows
    void fit(const WindowView& w) override {
        ++fits;
        REQUIRE(w.rv.data() == base + w.begin);
    }
    std::vector<double> forecast(const WindowView& w, std::size_t steps) override {
        seen.emplace_back(static_cast<std::size_t>(w.rv.data() - base), static_cast<std::size_t>(w.rv.data() - base) + w.rv.size());
        return std::vector<double>(steps, 1.0);
    }
};

econometric::HarParams har_dgp() { return {1e-5, 0.4, 0.3, 0.2}; }

} // namespace

TEST_CASE("point losses", "[backtest][losses]") {
    const std::vector<double> actual{1.0, 2.0}, pred{1.1, 1.8};
    const auto l = point_losses(pred, actual);
    CHECK(l.mape == Approx(0.1).epsilon(1e-12));
    CHECK(l.mae == Approx(0.15).epsilon(1e-12));
    CHECK(l.mse == Approx(0.025).epsilon(1e-12));
    CHECK(l.rmse == Approx(0.1581139).margin(5e-8));

    const auto zero = point_losses(actual, actual);
    CHECK(zero.mse == 0.0);
    CHECK(zero.rmse == 0.0);
    CHECK(zero.mae == 0.0);
    CHECK(zero.mape == 0.0);

    const std::vector<double> a{0.0, 2.0}, p{0.5, 1.0};
    const auto ex = point_losses(p, a);
    CHECK(ex.mape_excluded == 1);
    CHECK(ex.mape == 0.5);
    CHECK_THROWS_AS(point_losses(std::vector<double>{0.3}, std::vector<double>{0.0}), std::domain_error);
    CHECK_THROWS_AS(point_losses(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("qlike forms", "[backtest][losses]") {
    const std::vector<double> one{1.0}, e{std::exp(1.0)}, two{2.0};
    CHECK(qlike(one, one, QlikeForm::paper).value == 0.0);
    CHECK(qlike(one, one, QlikeForm::canonical).value == 0.0);
    CHECK(qlike(e, e, QlikeForm::paper).value == Approx(1.0).epsilon(1e-15));
    CHECK(qlike(e, e, QlikeForm::canonical).value == 0.0);
    CHECK(qlike(two, one, QlikeForm::canonical).value == Approx(0.1931472).margin(5e-8));
    CHECK(qlike(two, one, QlikeForm::canonical).value == Approx(0.5 - std::log(0.5) - 1.0).epsilon(1e-15));

    SECTION("non-positive prediction names the record") {
        try {
            qlike(std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 1.0}, QlikeForm::paper);
            FAIL("expected an error");
        } catch (const std::domain_error& err) {
            CHECK(std::string(err.what()).find("record 1") != std::string::npos);
        }
    }
    SECTION("zero actuals are excluded from the canonical form only") {
        const std::vector<double> a{0.0, 1.0}, p{1.0, 1.0};
        const auto c = qlike(p, a, QlikeForm::canonical);
        CHECK(c.excluded == 1);
        CHECK(c.value == 0.0);
        CHECK(qlike(p, a, QlikeForm::paper).value == -0.5);
    }
    SECTION("canonical is positive for any imperfect forecast") {
        CounterRng rng(3);
        for (int i = 0; i < 2000; ++i) {
            std::vector<double> a(5), p(5);
            for (std::size_t k = 0; k < 5; ++k) {
                a[k] = 1e-4 * (0.1 + rng.uniform());
                p[k] = a[k];
            }
            p[i % 5] *= 1.0 + (rng.uniform() - 0.5) * 1e-3 + 1e-9;
            REQUIRE(qlike(p, a, QlikeForm::canonical).value > 0.0);
        }
    }
}

TEST_CASE("record counts", "[backtest][rolling]") {
    auto rv = make_rv(std::vector<double>(100, 1.0));
    Spy spy;
    spy.base = rv.values.data();
    const auto sets = rolling_forecast(spy, "spy", rv, {}, {90, {1}, 1});
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].records.size() == 10);
    CHECK(sets[0].records.front().target_index == 90);
    CHECK(sets[0].records.back().target_index == 99);
    CHECK(expected_records(5776, 4077, 1) == 1699);
    CHECK_THROWS(rolling_forecast(spy, "spy", rv, {}, {90, {10}, 1}));
    CHECK_THROWS(rolling_forecast(spy, "spy", rv, {}, {20, {1}, 1}));
}

TEST_CASE("temporal hygiene by enumeration", "[backtest][rolling]") {
    for (std::size_t n = 32; n <= 120; ++n) {
        auto rv = make_rv(std::vector<double>(n, 1.0));
        for (std::size_t w = 30; w + 1 < n; ++w) {
            std::vector<std::size_t> hs(n - w - 1);
            std::iota(hs.begin(), hs.end(), std::size_t{1});
            for (std::size_t refit : {std::size_t{1}, std::size_t{7}}) {
                Spy spy;
                spy.base = rv.values.data();
                const auto sets = rolling_forecast(spy, "spy", rv, {}, {w, hs, refit});
                for (const auto& set : sets) {
                    REQUIRE(set.records.size() == n - w - set.horizon + 1);
                    for (const auto& r : set.records) {
                        REQUIRE(r.fit_end <= r.info_end);
                        REQUIRE(r.info_end <= r.target_index);
                        REQUIRE(r.fit_end - r.fit_begin == w);
                        REQUIRE(r.info_end - r.fit_end < refit);
                    }
                }
                for (const auto& [b, e] : spy.seen) REQUIRE(e - b == w);
                REQUIRE(spy.fits == (n - w - 1 + refit) / refit);
            }
        }
    }
}

TEST_CASE("har fixed point on a constant series", "[backtest][rolling]") {
    const double c = 2.5e-4;
    const auto rv = make_rv(std::vector<double>(200, c));
    ModelSpec m = default_model(ModelKind::har);
    // beta0 + (beta1 + beta2 + beta3) c = c
    m.har_fixed = econometric::HarParams{c * 0.25, 0.5, 0.15, 0.1};
    const auto res = run_backtest({m}, rv, {}, {120, {1, 5, 30}, 1}, 1);
    for (const auto& set : res.forecasts)
        for (const auto& r : set.records) REQUIRE(r.predicted == Approx(c).epsilon(1e-14));
    for (const auto& cell : res.table.cells) {
        CHECK(cell.point.mse == Approx(0.0).margin(1e-30));
        CHECK(cell.point.mae == Approx(0.0).margin(1e-17));
        CHECK(cell.point.mape == Approx(0.0).margin(1e-13));
        CHECK(cell.qlike_canonical.value == Approx(0.0).margin(1e-13));
        CHECK(cell.qlike_paper.value == Approx(std::log(c)).epsilon(1e-12));
    }
}

TEST_CASE("horizon sweep", "[backtest][sweep]") {
    econometric::HarSimulateOptions so;
    so.noise_sd = 1e-5;
    const auto rv = make_rv(econometric::har_simulate(har_dgp(), 900, 17, so));
    const std::vector<std::size_t> table5{1, 2, 3, 4, 5, 6, 7, 14, 30, 60, 90};
    const std::vector<ModelSpec> models{default_model(ModelKind::har), default_model(ModelKind::garch)};
    const auto sweep = run_backtest(models, rv, {}, {500, table5, 1}, 7);

    SECTION("grid is complete and consistent") {
        CHECK(sweep.table.cells.size() == models.size() * table5.size());
        std::ostringstream csv;
        write_loss_csv(csv, sweep.table);
        std::istringstream in(csv.str());
        std::string line;
        std::getline(in, line);
        CHECK(line == "loss,model,1d,2d,3d,4d,5d,6d,7d,14d,30d,60d,90d");
        std::size_t rows = 0;
        while (std::getline(in, line)) {
            ++rows;
            CHECK(std::count(line.begin(), line.end(), ',') == 12);
        }
        CHECK(rows == 6 * models.size());
        for (const auto& c : sweep.table.cells) {
            CHECK(c.records == 900 - 500 - c.horizon + 1);
            CHECK(std::abs(c.point.rmse * c.point.rmse - c.point.mse) <= 1e-12 * c.point.mse);
            CHECK(c.qlike_canonical.value > 0.0);
        }
        const auto j = to_json(sweep.table);
        CHECK(j.at("cells").size() == 22);
        CHECK(j.at("cells").at(0).contains("qlike_paper"));
    }
    SECTION("har loss does not shrink with horizon") {
        // Once the iterated forecast has converged (h >= 60) neighbouring
        // horizons differ by less than the sampling noise of one path, so the
        // expected loss curve is estimated by averaging fixed seeds.
        std::vector<double> mean_q(table5.size(), 0.0);
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            const auto big = make_rv(econometric::har_simulate(har_dgp(), 5776, seed, so));
            const auto har = run_backtest({default_model(ModelKind::har)}, big, {}, {4077, table5, 1}, 7);
            for (std::size_t j = 0; j < table5.size(); ++j)
                mean_q[j] += har.table.at("har", table5[j]).qlike_canonical.value / 8.0;
        }
        for (std::size_t j = 1; j < table5.size(); ++j) {
            INFO("h = " << table5[j] << " mean qlike " << mean_q[j] << " previous " << mean_q[j - 1]);
            CHECK(mean_q[j] >= mean_q[j - 1]);
        }
    }
    SECTION("a one-horizon sweep equals a single rolling run") {
        const auto one = run_backtest(models, rv, {}, {500, {1}, 1}, 7);
        for (const auto& m : {"har", "garch"})
            CHECK(loss_value(one.table.at(m, 1), "qlike_canonical") == loss_value(sweep.table.at(m, 1), "qlike_canonical"));
    }
}

TEST_CASE("runner determinism and scheduling independence", "[backtest][runner]") {
    econometric::HarSimulateOptions so;
    so.noise_sd = 1e-5;
    const auto rv = make_rv(econometric::har_simulate(har_dgp(), 420, 5, so));
    std::vector<ModelSpec> models;
    for (auto k : {ModelKind::gru, ModelKind::har, ModelKind::rnn, ModelKind::rgarch}) {
        auto m = default_model(k);
        m.neural.config.epochs = 2;
        m.refit_every = is_neural(k) ? 25 : 0;
        models.push_back(m);
    }
    const RollingSpec spec{360, {1, 3}, 1};
    const auto a = run_backtest(models, rv, {}, spec, 99, 1);
    const auto b = run_backtest(models, rv, {}, spec, 99, 3);
    std::ostringstream ca, cb;
    write_loss_csv(ca, a.table);
    write_loss_csv(cb, b.table);
    CHECK(ca.str() == cb.str());
    CHECK(a.table.at("gru", 1).fits == 3);
    CHECK(a.table.at("har", 3).fits == 60);
    const auto c = run_backtest(models, rv, {}, spec, 100, 1);
    CHECK(c.table.at("gru", 1).point.mse != a.table.at("gru", 1).point.mse);
    CHECK(c.table.at("har", 1).point.mse == a.table.at("har", 1).point.mse);

    CHECK_THROWS_WITH(parse_model_kind("arima"), Catch::Matchers::ContainsSubstring("rnn, lstm, gru, garch, rgarch, har"));
    CHECK_THROWS(run_backtest({models[1], models[1]}, rv, {}, spec, 1));
}

TEST_CASE("forecast csv", "[backtest][report]") {
    econometric::HarSimulateOptions so;
    so.noise_sd = 1e-5;
    const auto rv = make_rv(econometric::har_simulate(har_dgp(), 140, 5, so));
    const auto res = run_backtest({default_model(ModelKind::har)}, rv, {}, {100, {2}, 1}, 1);
    std::ostringstream os;
    write_forecast_csv(os, res.forecasts[0], rv.timestamps);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "timestamp,predicted,actual,fit_begin,fit_end");
    std::getline(in, line);
    // first target is index 101; its window is [0, 100)
    CHECK(line.rfind(format_timestamp(rv.timestamps[101]) + ",", 0) == 0);
    CHECK(line.substr(line.size() - 21) == format_timestamp(rv.timestamps[0]) + "," + format_timestamp(rv.timestamps[99]));
}
