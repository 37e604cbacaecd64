#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "rvf/backtest/losses.hpp"
#include "rvf/backtest/models.hpp"
#include "rvf/backtest/rolling.hpp"
#include "rvf/rng.hpp"

namespace rvf::backtest {

struct LossCell {
    std::string model;
    std::size_t horizon = 0;
    PointLosses point;
    QlikeResult qlike_paper;
    QlikeResult qlike_canonical;
    std::size_t records = 0;
    std::size_t floored = 0;
    std::size_t refit_every = 1;
    std::size_t fits = 0;
    std::uint64_t seed = 0;
};

inline LossCell evaluate(const ForecastSet& set) {
    std::vector<double> pred, actual;
    pred.reserve(set.records.size());
    actual.reserve(set.records.size());
    for (const auto& r : set.records) {
        pred.push_back(r.predicted);
        actual.push_back(r.actual);
    }
    LossCell c;
    c.model = set.model;
    c.horizon = set.horizon;
    c.point = point_losses(pred, actual);
    c.qlike_paper = qlike(pred, actual, QlikeForm::paper);
    c.qlike_canonical = qlike(pred, actual, QlikeForm::canonical);
    c.records = set.records.size();
    c.floored = set.floored;
    c.refit_every = set.refit_every;
    c.fits = set.fits;
    return c;
}

/// Model-major grid; models and horizons keep the order they were requested in.
struct LossTable {
    std::vector<std::string> models;
    std::vector<std::size_t> horizons;
    std::vector<LossCell> cells;

    const LossCell& at(std::string_view model, std::size_t horizon) const {
        for (const auto& c : cells)
            if (c.model == model && c.horizon == horizon) return c;
        throw std::out_of_range("loss table: no cell for " + std::string(model) + " at horizon " + std::to_string(horizon));
    }
};

struct BacktestResult {
    std::vector<ForecastSet> forecasts; ///< model-major, horizon-minor
    LossTable table;
};

/// Per-model seed: the model's stream of the run seed, so cells do not
/// depend on scheduling order.
inline std::uint64_t cell_seed(std::uint64_t seed, std::string_view model) {
    CounterRng s = CounterRng(seed).split(model);
    return s();
}

/// Runs every model over the rolling grid on up to `threads` workers (0 =
/// hardware concurrency). One estimation per origin serves all horizons.
inline BacktestResult run_backtest(const std::vector<ModelSpec>& models, const RvSeries& rv,
                                   std::span<const double> returns, const RollingSpec& spec, std::uint64_t seed,
                                   std::size_t threads = 0) {
    spec.validate();
    if (models.empty()) throw std::invalid_argument("backtest: no models requested");
    for (std::size_t i = 0; i < models.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (models[i].name() == models[j].name())
                throw std::invalid_argument("backtest: model '" + models[i].name() + "' listed twice");

    std::vector<std::vector<ForecastSet>> per_model(models.size());
    std::vector<std::exception_ptr> errors(models.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < models.size();) {
            try {
                RollingSpec s = spec;
                s.refit_every = models[i].cadence();
                const auto name = models[i].name();
                auto f = make_forecaster(models[i], s.max_horizon(), cell_seed(seed, name));
                per_model[i] = rolling_forecast(*f, name, rv, returns, s);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, models.size());
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    BacktestResult out;
    out.table.horizons = spec.horizons;
    for (std::size_t i = 0; i < models.size(); ++i) {
        out.table.models.push_back(models[i].name());
        for (auto& set : per_model[i]) {
            auto cell = evaluate(set);
            cell.seed = is_neural(models[i].kind) ? cell_seed(seed, set.model) : 0;
            out.table.cells.push_back(std::move(cell));
            out.forecasts.push_back(std::move(set));
        }
    }
    return out;
}

} // namespace rvf::backtest
