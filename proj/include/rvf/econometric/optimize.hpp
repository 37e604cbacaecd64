#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace rvf::econometric {

enum class Bound {
    free,         ///< identity
    positive,     ///< x = exp(z)
    unit_interval ///< x = 1 / (1 + exp(-z))
};

struct OptimizeOptions {
    double diameter_tolerance = 1e-10; ///< in the unconstrained coordinates
    std::size_t max_evaluations = 10000;
    double initial_step = 0.1;
    std::size_t max_restarts = 3;
};

struct OptimizeResult {
    std::vector<double> point; ///< natural (constrained) coordinates
    double value = 0.0;
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

namespace detail {

inline double to_unconstrained(double x, Bound b) {
    switch (b) {
    case Bound::free: return x;
    case Bound::positive:
        if (!(x > 0.0)) throw std::invalid_argument("optimize: positive-bounded start must be > 0");
        return std::log(x);
    case Bound::unit_interval:
        if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("optimize: unit-bounded start must lie in (0, 1)");
        return std::log(x / (1.0 - x));
    }
    return x;
}

inline double to_natural(double z, Bound b) {
    switch (b) {
    case Bound::free: return z;
    case Bound::positive: return std::exp(z);
    case Bound::unit_interval: return 1.0 / (1.0 + std::exp(-z));
    }
    return z;
}

/// Saturated maps (exp underflow, logit rounding to 1) leave the open domain.
inline bool strictly_inside(double x, Bound b) {
    switch (b) {
    case Bound::free: return std::isfinite(x);
    case Bound::positive: return x > 0.0 && std::isfinite(x);
    case Bound::unit_interval: return x > 0.0 && x < 1.0;
    }
    return false;
}

} // namespace detail

/// Nelder-Mead simplex minimisation in unconstrained coordinates.
///
/// Each bounded coordinate is mapped through log or logit, so every trial
/// point is feasible. Non-finite objective values are treated as +inf and
/// simply lose every comparison. A run stops when the largest distance (max
/// norm) from the best vertex to any other vertex drops below the diameter
/// tolerance, or when the evaluation budget is spent. After a converged run
/// the simplex is rebuilt around the best point and the search restarted,
/// which guards against premature collapse; restarts end once one fails to
/// improve the best value.
inline OptimizeResult optimize(const Objective& objective, std::span<const double> initial,
                               std::span<const Bound> bounds, const OptimizeOptions& opts = {}) {
    const std::size_t dim = initial.size();
    if (dim == 0) throw std::invalid_argument("optimize: empty parameter vector");
    if (bounds.size() != dim) throw std::invalid_argument("optimize: bounds and initial point differ in size");

    std::vector<double> natural(dim);
    OptimizeResult result;
    auto eval = [&](const std::vector<double>& z) {
        bool feasible = true;
        for (std::size_t i = 0; i < dim; ++i) {
            natural[i] = detail::to_natural(z[i], bounds[i]);
            feasible = feasible && detail::strictly_inside(natural[i], bounds[i]);
        }
        ++result.evaluations;
        if (!feasible) return std::numeric_limits<double>::infinity();
        const double v = objective(natural);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    std::vector<double> best(dim);
    for (std::size_t i = 0; i < dim; ++i) best[i] = detail::to_unconstrained(initial[i], bounds[i]);
    double best_value = eval(best);
    if (!std::isfinite(best_value)) throw std::domain_error("optimize: objective is not finite at the initial point");

    std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(dim));
    std::vector<double> values(dim + 1);
    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);

    for (std::size_t run = 0; run <= opts.max_restarts; ++run) {
        simplex[0] = best;
        values[0] = best_value;
        for (std::size_t i = 0; i < dim; ++i) {
            simplex[i + 1] = best;
            simplex[i + 1][i] += opts.initial_step;
            values[i + 1] = eval(simplex[i + 1]);
        }
        bool converged = false;
        while (result.evaluations < opts.max_evaluations) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
            const std::size_t lo = order.front(), hi = order.back(), second = order[dim - 1];

            double diameter = 0.0;
            for (std::size_t v = 0; v <= dim; ++v)
                for (std::size_t i = 0; i < dim; ++i)
                    diameter = std::max(diameter, std::abs(simplex[v][i] - simplex[lo][i]));
            if (diameter < opts.diameter_tolerance) {
                converged = true;
                break;
            }
            ++result.iterations;

            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t v = 0; v <= dim; ++v)
                if (v != hi)
                    for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v][i];
            for (auto& c : centroid) c /= static_cast<double>(dim);

            for (std::size_t i = 0; i < dim; ++i) trial[i] = centroid[i] + (centroid[i] - simplex[hi][i]);
            const double f_reflect = eval(trial);
            if (f_reflect < values[lo]) {
                for (std::size_t i = 0; i < dim; ++i) trial2[i] = centroid[i] + 2.0 * (centroid[i] - simplex[hi][i]);
                const double f_expand = eval(trial2);
                if (f_expand < f_reflect) {
                    simplex[hi] = trial2;
                    values[hi] = f_expand;
                } else {
                    simplex[hi] = trial;
                    values[hi] = f_reflect;
                }
                continue;
            }
            if (f_reflect < values[second]) {
                simplex[hi] = trial;
                values[hi] = f_reflect;
                continue;
            }
            const bool outside = f_reflect < values[hi];
            for (std::size_t i = 0; i < dim; ++i)
                trial2[i] = outside ? centroid[i] + 0.5 * (trial[i] - centroid[i])
                                    : centroid[i] + 0.5 * (simplex[hi][i] - centroid[i]);
            const double f_contract = eval(trial2);
            if (f_contract < (outside ? f_reflect : values[hi])) {
                simplex[hi] = trial2;
                values[hi] = f_contract;
                continue;
            }
            for (std::size_t v = 0; v <= dim; ++v) {
                if (v == lo) continue;
                for (std::size_t i = 0; i < dim; ++i) simplex[v][i] = simplex[lo][i] + 0.5 * (simplex[v][i] - simplex[lo][i]);
                values[v] = eval(simplex[v]);
            }
        }
        const auto lo = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
        const bool improved = values[lo] < best_value;
        if (values[lo] <= best_value) {
            best = simplex[lo];
            best_value = values[lo];
        }
        result.converged = converged;
        if (!converged || !improved || result.evaluations >= opts.max_evaluations) break;
    }

    result.point.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) result.point[i] = detail::to_natural(best[i], bounds[i]);
    result.value = best_value;
    return result;
}

} // namespace rvf::econometric
