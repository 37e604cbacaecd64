#pragma once

// Adapters that put each model family behind the rolling Forecaster interface.

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvf/backtest/rolling.hpp"
#include "rvf/econometric/garch.hpp"
#include "rvf/econometric/har.hpp"
#include "rvf/econometric/realized_garch.hpp"
#include "rvf/neural/train.hpp"
#include "rvf/rng.hpp"

namespace rvf::backtest {

enum class ModelKind { rnn, lstm, gru, garch, rgarch, har };

inline constexpr std::array<std::string_view, 6> kModelNames{"rnn", "lstm", "gru", "garch", "rgarch", "har"};

inline std::string_view to_string(ModelKind k) { return kModelNames[static_cast<std::size_t>(k)]; }

inline ModelKind parse_model_kind(std::string_view s) {
    for (std::size_t i = 0; i < kModelNames.size(); ++i)
        if (kModelNames[i] == s) return static_cast<ModelKind>(i);
    throw std::invalid_argument("unknown model '" + std::string(s) + "'; valid models: rnn, lstm, gru, garch, rgarch, har");
}

inline bool is_neural(ModelKind k) { return k == ModelKind::rnn || k == ModelKind::lstm || k == ModelKind::gru; }

struct ModelSpec {
    ModelKind kind = ModelKind::har;
    neural::NeuralSpec neural;                   ///< neural kinds only; output_days is set by the harness
    std::optional<econometric::HarParams> har_fixed; ///< skip estimation and forecast with these betas
    std::size_t refit_every = 0;                 ///< 0 selects the default cadence

    std::string name() const { return std::string(to_string(kind)); }
    std::size_t cadence() const { return refit_every ? refit_every : (is_neural(kind) ? 20 : 1); }
};

inline ModelSpec default_model(ModelKind kind) {
    ModelSpec m;
    m.kind = kind;
    if (kind == ModelKind::rnn) m.neural = neural::default_spec(neural::CellKind::rnn);
    if (kind == ModelKind::lstm) m.neural = neural::default_spec(neural::CellKind::lstm);
    if (kind == ModelKind::gru) m.neural = neural::default_spec(neural::CellKind::gru);
    return m;
}

namespace detail {

/// GARCH-family models need a return series; without one the positive root
/// of RV stands in, which gives the same squared innovations.
inline std::vector<double> returns_or_root(const WindowView& w) {
    if (!w.returns.empty()) return {w.returns.begin(), w.returns.end()};
    std::vector<double> u(w.rv.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::sqrt(w.rv[i]);
    return u;
}

class GarchForecaster final : public Forecaster {
public:
    void fit(const WindowView& w) override {
        const auto u = returns_or_root(w);
        econometric::GarchFitOptions opts;
        opts.initial = params_; // warm start from the previous origin
        params_ = econometric::garch_fit(u, opts).params;
    }
    std::vector<double> forecast(const WindowView& w, std::size_t steps) override {
        const auto u = returns_or_root(w);
        const auto sigma2 = econometric::garch_filter(*params_, u);
        return econometric::garch_forecast(*params_, u.back() * u.back(), sigma2.back(), steps);
    }

private:
    std::optional<econometric::GarchParams> params_;
};

class RealizedGarchForecaster final : public Forecaster {
public:
    void fit(const WindowView& w) override {
        const auto r = returns_or_root(w);
        econometric::RealizedGarchFitOptions opts;
        opts.initial = params_;
        params_ = econometric::rgarch_fit(r, w.rv, opts).params;
    }
    std::vector<double> forecast(const WindowView& w, std::size_t steps) override {
        const auto r = returns_or_root(w);
        return econometric::rgarch_forecast(*params_, econometric::rgarch_state(*params_, r, w.rv), steps);
    }

private:
    std::optional<econometric::RealizedGarchParams> params_;
};

class HarForecaster final : public Forecaster {
public:
    explicit HarForecaster(std::optional<econometric::HarParams> fixed) : fixed_(fixed.has_value()), params_(fixed) {}
    void fit(const WindowView& w) override {
        if (!fixed_) params_ = econometric::har_fit(w.rv).params;
    }
    std::vector<double> forecast(const WindowView& w, std::size_t steps) override {
        return econometric::har_forecast(*params_, w.rv, steps).values;
    }

private:
    bool fixed_;
    std::optional<econometric::HarParams> params_;
};

/// Scaler and windows are rebuilt from each estimation window; refits warm
/// start from the previous weights. Seeds come from the cell stream, one
/// draw per refit.
class NeuralForecaster final : public Forecaster {
public:
    NeuralForecaster(neural::NeuralSpec spec, std::size_t output_days, std::uint64_t seed)
        : spec_(std::move(spec)), rng_(seed) {
        spec_.architecture.output_days = output_days;
    }
    void fit(const WindowView& w) override {
        const auto scaled = neural::scaler_fit_transform(w.rv);
        const auto data = neural::make_windows(scaled.values, spec_.sequence_length, spec_.architecture.output_days);
        auto cfg = spec_.config;
        cfg.seed = rng_();
        auto res = neural::train(spec_.architecture, data, cfg, model_ ? &*model_ : nullptr);
        model_ = std::move(res.model);
        scaler_ = scaled.scaler;
    }
    std::vector<double> forecast(const WindowView& w, std::size_t steps) override {
        auto out = neural::predict(*model_, scaler_, w.rv.last(spec_.sequence_length), spec_.sequence_length);
        out.resize(std::max(out.size(), steps), out.back());
        return out;
    }

private:
    neural::NeuralSpec spec_;
    CounterRng rng_;
    std::optional<neural::RecurrentModel> model_;
    neural::RangeScaler scaler_;
};

} // namespace detail

/// Neural heads emit `max_horizon` outputs; component h-1 is the h-step forecast.
inline std::unique_ptr<Forecaster> make_forecaster(const ModelSpec& m, std::size_t max_horizon, std::uint64_t seed) {
    switch (m.kind) {
    case ModelKind::garch: return std::make_unique<detail::GarchForecaster>();
    case ModelKind::rgarch: return std::make_unique<detail::RealizedGarchForecaster>();
    case ModelKind::har: return std::make_unique<detail::HarForecaster>(m.har_fixed);
    default: return std::make_unique<detail::NeuralForecaster>(m.neural, max_horizon, seed);
    }
}

} // namespace rvf::backtest
