#pragma once

// GARCH(1,1) with Gaussian quasi-likelihood:
//   sigma2_t = omega + alpha * u_{t-1}^2 + beta * sigma2_{t-1},
// omega = (1 - alpha - beta) * V_L.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "rvf/econometric/common.hpp"
#include "rvf/econometric/optimize.hpp"
#include "rvf/rng.hpp"
#include "rvf/series.hpp"

namespace rvf::econometric {

struct GarchParams {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;

    double persistence() const noexcept { return alpha + beta; }
    double long_run_variance() const noexcept { return omega / (1.0 - alpha - beta); }

    void validate() const {
        if (!(omega > 0.0)) throw std::invalid_argument("garch: omega must be > 0");
        if (!(alpha >= 0.0) || !(beta >= 0.0)) throw std::invalid_argument("garch: alpha and beta must be >= 0");
        if (!(alpha + beta < 1.0)) throw std::invalid_argument("garch: alpha + beta must be < 1");
    }
};

struct GarchFit {
    GarchParams params;
    FitDiagnostics diagnostics;
};

struct GarchFitOptions {
    OptimizeOptions optimizer;
    std::optional<GarchParams> initial; ///< warm start; variance-targeted guess otherwise
};

/// Sigma2 is seeded with the zero-mean sample variance mean(u^2).
inline double garch_initial_variance(std::span<const double> u) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return s / static_cast<double>(u.size());
}

/// Conditional variances sigma2_1..sigma2_n.
inline std::vector<double> garch_filter(const GarchParams& p, std::span<const double> u) {
    std::vector<double> sigma2(u.size());
    if (u.empty()) return sigma2;
    sigma2[0] = garch_initial_variance(u);
    for (std::size_t t = 1; t < u.size(); ++t)
        sigma2[t] = std::max(p.omega + p.alpha * u[t - 1] * u[t - 1] + p.beta * sigma2[t - 1], kVarianceFloor);
    return sigma2;
}

inline double garch_log_likelihood(const GarchParams& p, std::span<const double> u) {
    constexpr double log_2pi = 1.8378770664093454836; // ln(2 pi)
    if (u.empty()) return 0.0;
    double sigma2 = std::max(garch_initial_variance(u), kVarianceFloor);
    double ll = 0.0;
    for (std::size_t t = 0; t < u.size(); ++t) {
        if (t > 0) sigma2 = std::max(p.omega + p.alpha * u[t - 1] * u[t - 1] + p.beta * sigma2, kVarianceFloor);
        ll -= 0.5 * (log_2pi + std::log(sigma2) + u[t] * u[t] / sigma2);
    }
    return ll;
}

/// Maximum-likelihood fit. The search runs over (omega, alpha + beta,
/// alpha / (alpha + beta)) with log/logit maps, so alpha + beta < 1 always.
inline GarchFit garch_fit(std::span<const double> u, const GarchFitOptions& opts = {}) {
    if (u.size() < 100) throw std::invalid_argument("garch_fit: need at least 100 returns");
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    if (*lo == *hi) throw std::domain_error("garch_fit: returns have zero variance");
    const double var = garch_initial_variance(u);

    GarchParams start = opts.initial.value_or(GarchParams{var * 0.05, 0.05, 0.90});
    if (!(start.alpha > 0.0)) start.alpha = 1e-4;
    if (!(start.beta > 0.0)) start.beta = 1e-4;
    if (!(start.alpha + start.beta < 1.0)) {
        const double s = 0.99 / (start.alpha + start.beta);
        start.alpha *= s;
        start.beta *= s;
    }
    if (!(start.omega > 0.0)) start.omega = var * (1.0 - start.alpha - start.beta);

    auto unpack = [](std::span<const double> x) {
        const double persistence = x[1], share = x[2];
        return GarchParams{x[0], persistence * share, persistence * (1.0 - share)};
    };
    const std::array<double, 3> initial{start.omega, start.alpha + start.beta, start.alpha / (start.alpha + start.beta)};
    const std::array<Bound, 3> bounds{Bound::positive, Bound::unit_interval, Bound::unit_interval};

    const auto res = optimize([&](std::span<const double> x) { return -garch_log_likelihood(unpack(x), u); },
                              initial, bounds, opts.optimizer);
    GarchFit fit;
    fit.params = unpack(res.point);
    fit.diagnostics.log_likelihood = -res.value;
    fit.diagnostics.iterations = res.iterations;
    fit.diagnostics.evaluations = res.evaluations;
    fit.diagnostics.converged = res.converged;
    return fit;
}

/// Step 1 is the one-step recursion; step k >= 2 reverts geometrically,
/// V_L + (alpha + beta)^{k-1} (step1 - V_L).
inline std::vector<double> garch_forecast(const GarchParams& p, double last_u2, double last_sigma2, std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("garch_forecast: horizon must be >= 1");
    if (last_u2 < 0.0 || last_sigma2 < 0.0) throw std::invalid_argument("garch_forecast: negative state");
    std::vector<double> out(horizon);
    const double step1 = p.omega + p.alpha * last_u2 + p.beta * last_sigma2;
    const double vl = p.long_run_variance();
    double decay = 1.0;
    out[0] = step1;
    for (std::size_t k = 1; k < horizon; ++k) {
        decay *= p.persistence();
        out[k] = vl + decay * (step1 - vl);
    }
    return out;
}

/// Synthetic daily timestamps for simulated series, starting 2000-01-03.
inline std::vector<Timestamp> synthetic_days(std::size_t n) {
    using namespace std::chrono;
    std::vector<Timestamp> ts(n);
    const sys_days start{year{2000} / January / 3};
    for (std::size_t i = 0; i < n; ++i) ts[i] = start + days{static_cast<int>(i)};
    return ts;
}

/// u_t = sigma_t z_t, z_t standard normal, sigma2 started at the long-run variance.
inline ReturnSeries garch_simulate(const GarchParams& p, std::size_t n, std::uint64_t seed) {
    p.validate();
    CounterRng rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    ReturnSeries out;
    out.frequency = Frequency::daily;
    out.values.resize(n);
    out.timestamps = synthetic_days(n);
    double sigma2 = p.long_run_variance();
    double prev_u = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) sigma2 = p.omega + p.alpha * prev_u * prev_u + p.beta * sigma2;
        prev_u = std::sqrt(sigma2) * z(rng);
        out.values[t] = prev_u;
    }
    return out;
}

inline nlohmann::json to_json(const GarchFit& fit) {
    return fit_to_json("garch",
                       {{"omega", fit.params.omega},
                        {"alpha", fit.params.alpha},
                        {"beta", fit.params.beta},
                        {"v_long_run", fit.params.long_run_variance()}},
                       fit.diagnostics);
}

} // namespace rvf::econometric
