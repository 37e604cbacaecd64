#pragma once

// Heterogeneous autoregression of realized variance on its lagged daily,
// weekly-average and monthly-average components.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "rvf/econometric/common.hpp"
#include "rvf/ols.hpp"
#include "rvf/rng.hpp"

namespace rvf::econometric {

struct HarParams {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;
    std::size_t weekly_window = 5;
    std::size_t monthly_window = 22;

    void validate() const {
        if (weekly_window < 1 || monthly_window < 1) throw std::invalid_argument("har: windows must be >= 1");
        if (weekly_window > monthly_window) throw std::invalid_argument("har: weekly window exceeds monthly window");
    }
};

struct HarFeatures {
    double daily = 0.0;
    double weekly = 0.0;
    double monthly = 0.0;
};

struct HarFit {
    HarParams params;
    FitDiagnostics diagnostics;
};

struct HarForecast {
    std::vector<double> values;
    std::size_t floored = 0; ///< negative predictions replaced by 0
};

/// Regressors for the observation at position `t` (0-based), built only
/// from rv[0..t-1].
inline HarFeatures har_features(std::span<const double> rv, std::size_t t, std::size_t weekly = 5, std::size_t monthly = 22) {
    if (t < monthly || t > rv.size()) throw std::invalid_argument("har_features: insufficient history");
    HarFeatures f;
    f.daily = rv[t - 1];
    for (std::size_t j = 1; j <= monthly; ++j) {
        if (j <= weekly) f.weekly += rv[t - j];
        f.monthly += rv[t - j];
    }
    f.weekly /= static_cast<double>(weekly);
    f.monthly /= static_cast<double>(monthly);
    return f;
}

inline double har_predict_one(const HarParams& p, const HarFeatures& f) {
    return p.beta0 + p.beta1 * f.daily + p.beta2 * f.weekly + p.beta3 * f.monthly;
}

/// OLS of RV_t on (1, daily, weekly, monthly) for every t >= monthly window.
inline HarFit har_fit(std::span<const double> rv, std::size_t weekly = 5, std::size_t monthly = 22) {
    HarParams params;
    params.weekly_window = weekly;
    params.monthly_window = monthly;
    params.validate();
    if (rv.size() < monthly + 30) throw std::invalid_argument("har_fit: need at least 30 usable rows");
    const auto rows = static_cast<Eigen::Index>(rv.size() - monthly);
    Eigen::MatrixXd X(rows, 4);
    Eigen::VectorXd y(rows);
    for (std::size_t t = monthly; t < rv.size(); ++t) {
        const auto i = static_cast<Eigen::Index>(t - monthly);
        const auto f = har_features(rv, t, weekly, monthly);
        X.row(i) << 1.0, f.daily, f.weekly, f.monthly;
        y(i) = rv[t];
    }
    const auto res = ols(X, y);
    params.beta0 = res.coefficients(0);
    params.beta1 = res.coefficients(1);
    params.beta2 = res.coefficients(2);
    params.beta3 = res.coefficients(3);

    HarFit fit;
    fit.params = params;
    fit.diagnostics.sse = res.sse;
    const double n = static_cast<double>(rows);
    constexpr double log_2pi = 1.8378770664093454836;
    fit.diagnostics.log_likelihood =
        res.sse > 0.0 ? -0.5 * n * (log_2pi + std::log(res.sse / n) + 1.0) : std::numeric_limits<double>::infinity();
    fit.diagnostics.iterations = 1;
    fit.diagnostics.evaluations = 1;
    fit.diagnostics.converged = true;
    return fit;
}

/// Iterated forecasts: each prediction is appended to the history before the
/// next step's features are formed.
inline HarForecast har_forecast(const HarParams& p, std::span<const double> history, std::size_t horizon) {
    p.validate();
    if (horizon == 0) throw std::invalid_argument("har_forecast: horizon must be >= 1");
    if (history.size() < p.monthly_window) throw std::invalid_argument("har_forecast: insufficient history");
    std::vector<double> tail(history.end() - static_cast<std::ptrdiff_t>(p.monthly_window), history.end());
    HarForecast out;
    out.values.reserve(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
        double v = har_predict_one(p, har_features(tail, tail.size(), p.weekly_window, p.monthly_window));
        if (v < 0.0) {
            v = 0.0;
            ++out.floored;
        }
        out.values.push_back(v);
        tail.push_back(v);
    }
    return out;
}

struct HarSimulateOptions {
    double noise_sd = 0.0;
    std::size_t burn_in = 500;
    bool floor_at_zero = true;
};

/// RV_t = beta0 + beta1 RV^d + beta2 RV^w + beta3 RV^m + noise. The first
/// `monthly_window` values are drawn uniformly in [0.5, 1.5] times the
/// stationary mean so noise-free paths are not degenerate.
inline std::vector<double> har_simulate(const HarParams& p, std::size_t n, std::uint64_t seed,
                                        const HarSimulateOptions& opts = {}) {
    p.validate();
    const double persistence = p.beta1 + p.beta2 + p.beta3;
    if (!(persistence < 1.0)) throw std::invalid_argument("har_simulate: beta1 + beta2 + beta3 must be < 1");
    const double mean = p.beta0 / (1.0 - persistence);
    CounterRng rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> path;
    path.reserve(p.monthly_window + opts.burn_in + n);
    for (std::size_t i = 0; i < p.monthly_window; ++i) path.push_back(mean * (0.5 + rng.uniform()));
    while (path.size() < p.monthly_window + opts.burn_in + n) {
        double v = har_predict_one(p, har_features(path, path.size(), p.weekly_window, p.monthly_window));
        if (opts.noise_sd > 0.0) v += opts.noise_sd * noise(rng);
        if (opts.floor_at_zero) v = std::max(v, 0.0);
        path.push_back(v);
    }
    return {path.end() - static_cast<std::ptrdiff_t>(n), path.end()};
}

inline nlohmann::json to_json(const HarFit& fit) {
    const auto& p = fit.params;
    return fit_to_json("har",
                       {{"beta0", p.beta0}, {"beta1", p.beta1}, {"beta2", p.beta2}, {"beta3", p.beta3},
                        {"weekly_window", static_cast<double>(p.weekly_window)},
                        {"monthly_window", static_cast<double>(p.monthly_window)}},
                       fit.diagnostics);
}

} // namespace rvf::econometric
