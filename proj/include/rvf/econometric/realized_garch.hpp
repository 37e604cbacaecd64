#pragma once

// Realized GARCH with the return equation r_t = sqrt(h_t) z_t, the variance
// recursion
//   h_t = omega + alpha r_{t-1}^2 + beta h_{t-1} + gamma x_{t-1}
// and the measurement equation x_t = xi + phi h_t + e_t, e_t ~ N(0, sigma_u^2).

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "rvf/econometric/common.hpp"
#include "rvf/econometric/garch.hpp"
#include "rvf/econometric/optimize.hpp"
#include "rvf/rng.hpp"
#include "rvf/series.hpp"

namespace rvf::econometric {

struct RealizedGarchParams {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double xi = 0.0;
    double phi = 1.0;
    double sigma_u = 1.0;

    /// Persistence of h once E[r^2 | h] = h and E[x | h] = xi + phi h are
    /// substituted back into the recursion.
    double persistence() const noexcept { return alpha + beta + gamma * phi; }

    void validate() const {
        if (!(alpha >= 0.0) || !(beta >= 0.0)) throw std::invalid_argument("rgarch: alpha and beta must be >= 0");
        if (!(sigma_u > 0.0)) throw std::invalid_argument("rgarch: sigma_u must be > 0");
        if (!(persistence() < 1.0)) throw std::invalid_argument("rgarch: alpha + beta + gamma*phi must be < 1");
    }

    /// Stationary mean of h.
    double long_run_variance() const noexcept { return (omega + gamma * xi) / (1.0 - persistence()); }
};

struct RealizedGarchState {
    double last_r2 = 0.0;
    double last_x = 0.0;
    double last_h = 0.0;
};

struct RealizedGarchFit {
    RealizedGarchParams params;
    FitDiagnostics diagnostics;
};

struct RealizedGarchFitOptions {
    OptimizeOptions optimizer;
    std::optional<RealizedGarchParams> initial;
};

namespace detail {

inline void check_aligned(std::span<const double> r, std::span<const double> x) {
    if (r.size() != x.size()) throw std::invalid_argument("rgarch: returns and RV are not aligned (different lengths)");
}

inline double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

} // namespace detail

/// h_1..h_n, with h_1 = mean(x).
inline std::vector<double> rgarch_filter(const RealizedGarchParams& p, std::span<const double> r, std::span<const double> x) {
    detail::check_aligned(r, x);
    std::vector<double> h(r.size());
    if (r.empty()) return h;
    h[0] = std::max(detail::mean_of(x), kVarianceFloor);
    for (std::size_t t = 1; t < r.size(); ++t)
        h[t] = std::max(p.omega + p.alpha * r[t - 1] * r[t - 1] + p.beta * h[t - 1] + p.gamma * x[t - 1], kVarianceFloor);
    return h;
}

/// Joint Gaussian log-likelihood of returns and the realized measure.
inline double rgarch_log_likelihood(const RealizedGarchParams& p, std::span<const double> r, std::span<const double> x) {
    constexpr double log_2pi = 1.8378770664093454836;
    detail::check_aligned(r, x);
    if (r.empty()) return 0.0;
    const double log_su2 = 2.0 * std::log(p.sigma_u);
    const double inv_su2 = 1.0 / (p.sigma_u * p.sigma_u);
    double h = std::max(detail::mean_of(x), kVarianceFloor);
    double ll = 0.0;
    for (std::size_t t = 0; t < r.size(); ++t) {
        if (t > 0) h = std::max(p.omega + p.alpha * r[t - 1] * r[t - 1] + p.beta * h + p.gamma * x[t - 1], kVarianceFloor);
        const double e = x[t] - p.xi - p.phi * h;
        ll -= 0.5 * (log_2pi + std::log(h) + r[t] * r[t] / h);
        ll -= 0.5 * (log_2pi + log_su2 + e * e * inv_su2);
    }
    return ll;
}

/// Maximum-likelihood fit. xi and sigma_u are searched relative to mean(x)
/// so all coordinates share one scale; the persistence constraint is
/// enforced by rejecting infeasible trial points.
inline RealizedGarchFit rgarch_fit(std::span<const double> r, std::span<const double> x,
                                   const RealizedGarchFitOptions& opts = {}) {
    detail::check_aligned(r, x);
    if (r.size() < 200) throw std::invalid_argument("rgarch_fit: need at least 200 observations");
    bool all_zero = true;
    for (double v : x) all_zero = all_zero && v == 0.0;
    if (all_zero) throw std::domain_error("rgarch_fit: realized measure is identically zero");
    const double scale = detail::mean_of(x);
    if (!(scale > 0.0)) throw std::domain_error("rgarch_fit: realized measure has non-positive mean");

    RealizedGarchParams start;
    if (opts.initial) {
        start = *opts.initial;
    } else {
        double sx = 0.0;
        for (double v : x) sx += (v - scale) * (v - scale);
        start.alpha = 0.05;
        start.beta = 0.55;
        start.gamma = 0.3;
        start.xi = 0.0;
        start.phi = 1.0;
        start.sigma_u = std::sqrt(sx / static_cast<double>(x.size()));
        start.omega = scale * (1.0 - start.persistence());
    }
    start.alpha = std::max(start.alpha, 1e-6);
    start.beta = std::clamp(start.beta, 1e-6, 1.0 - 1e-6);
    if (!(start.persistence() < 1.0)) {
        start.gamma = 0.0;
        start.alpha = std::min(start.alpha, 0.5 * (1.0 - start.beta));
    }
    if (!(start.omega > 0.0)) start.omega = scale * 1e-3;
    if (!(start.sigma_u > 0.0)) start.sigma_u = scale;

    auto unpack = [scale](std::span<const double> v) {
        return RealizedGarchParams{v[0], v[1], v[2], v[3], v[4] * scale, v[5], v[6] * scale};
    };
    const std::array<double, 7> initial{start.omega, start.alpha, start.beta, start.gamma,
                                        start.xi / scale, start.phi, start.sigma_u / scale};
    const std::array<Bound, 7> bounds{Bound::positive, Bound::positive, Bound::unit_interval, Bound::free,
                                      Bound::free, Bound::free, Bound::positive};
    const auto res = optimize(
        [&](std::span<const double> v) {
            const auto p = unpack(v);
            if (!(p.persistence() < 1.0)) return std::numeric_limits<double>::infinity();
            return -rgarch_log_likelihood(p, r, x);
        },
        initial, bounds, opts.optimizer);

    RealizedGarchFit fit;
    fit.params = unpack(res.point);
    fit.diagnostics.log_likelihood = -res.value;
    fit.diagnostics.iterations = res.iterations;
    fit.diagnostics.evaluations = res.evaluations;
    fit.diagnostics.converged = res.converged;
    return fit;
}

/// State after filtering through the sample: (r_n^2, x_n, h_n).
inline RealizedGarchState rgarch_state(const RealizedGarchParams& p, std::span<const double> r, std::span<const double> x) {
    const auto h = rgarch_filter(p, r, x);
    if (h.empty()) throw std::invalid_argument("rgarch_state: empty sample");
    return {r.back() * r.back(), x.back(), h.back()};
}

/// Step 1 uses the observed (r^2, x); later steps substitute r^2 -> h and
/// x -> xi + phi h.
inline std::vector<double> rgarch_forecast(const RealizedGarchParams& p, const RealizedGarchState& s, std::size_t horizon) {
    if (horizon == 0) throw std::invalid_argument("rgarch_forecast: horizon must be >= 1");
    std::vector<double> out(horizon);
    double h = p.omega + p.alpha * s.last_r2 + p.beta * s.last_h + p.gamma * s.last_x;
    out[0] = h;
    for (std::size_t k = 1; k < horizon; ++k) {
        h = p.omega + p.alpha * h + p.beta * h + p.gamma * (p.xi + p.phi * h);
        out[k] = h;
    }
    return out;
}

struct RealizedGarchSample {
    ReturnSeries returns;
    std::vector<double> realized; ///< x_t, aligned with returns
};

/// h starts at its stationary mean; h is floored like the likelihood does.
inline RealizedGarchSample rgarch_simulate(const RealizedGarchParams& p, std::size_t n, std::uint64_t seed) {
    p.validate();
    CounterRng rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    RealizedGarchSample out;
    out.returns.frequency = Frequency::daily;
    out.returns.timestamps = synthetic_days(n);
    out.returns.values.resize(n);
    out.realized.resize(n);
    double h = std::max(p.long_run_variance(), kVarianceFloor);
    for (std::size_t t = 0; t < n; ++t) {
        if (t > 0) {
            const double r_prev = out.returns.values[t - 1];
            h = std::max(p.omega + p.alpha * r_prev * r_prev + p.beta * h + p.gamma * out.realized[t - 1], kVarianceFloor);
        }
        out.returns.values[t] = std::sqrt(h) * z(rng);
        out.realized[t] = p.xi + p.phi * h + p.sigma_u * z(rng);
    }
    return out;
}

inline nlohmann::json to_json(const RealizedGarchFit& fit) {
    const auto& p = fit.params;
    return fit_to_json("rgarch",
                       {{"omega", p.omega}, {"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma},
                        {"xi", p.xi}, {"phi", p.phi}, {"sigma_u", p.sigma_u}},
                       fit.diagnostics);
}

} // namespace rvf::econometric
