#pragma once

// Central finite-difference check of backprop gradients. The numeric side
// uses only the forward pass and a direct MSE.

#include <algorithm>
#include <cmath>
#include <string>

#include "rvf/neural/backprop.hpp"
#include "rvf/neural/model.hpp"
#include "rvf/neural/windows.hpp"
#include "rvf/rng.hpp"

namespace gradcheck {

struct Report {
    std::size_t checked = 0;
    std::size_t failures = 0;
    double worst_relative = 0.0;
    std::string worst_name;
};

inline double loss_of(const rvf::neural::RecurrentModel& m, const rvf::neural::Batch& b, const Eigen::MatrixXd* mask) {
    const auto fc = rvf::neural::forward(m, b.inputs, mask);
    return (fc.output - b.targets).squaredNorm() / static_cast<double>(b.targets.size());
}

/// Relative error below `rel_tol`; entries whose analytic and numeric
/// gradients are both below 1e-10 in magnitude are compared absolutely at 1e-8.
inline Report check(rvf::neural::RecurrentModel m, const rvf::neural::Batch& b, const Eigen::MatrixXd* mask = nullptr,
                    double step = 1e-5, double rel_tol = 1e-4) {
    const auto grads = rvf::neural::backprop(m, b, mask);
    Report r;
    for (std::size_t k = 0; k < m.tensors().size(); ++k) {
        auto& w = m[k];
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            const double saved = w.data()[i];
            w.data()[i] = saved + step;
            const double up = loss_of(m, b, mask);
            w.data()[i] = saved - step;
            const double down = loss_of(m, b, mask);
            w.data()[i] = saved;
            const double numeric = (up - down) / (2.0 * step);
            const double analytic = grads.d[k].data()[i];
            ++r.checked;
            double rel = 0.0;
            bool ok;
            if (std::abs(analytic) < 1e-10 && std::abs(numeric) < 1e-10) {
                ok = std::abs(analytic - numeric) < 1e-8;
            } else {
                rel = std::abs(analytic - numeric) / std::max(std::abs(analytic), std::abs(numeric));
                ok = rel < rel_tol;
            }
            if (!ok) ++r.failures;
            if (rel > r.worst_relative) {
                r.worst_relative = rel;
                r.worst_name = m.tensors()[k].name + "[" + std::to_string(i) + "]";
            }
        }
    }
    return r;
}

/// Seeded batch of `samples` sequences with targets, one feature per step.
inline rvf::neural::Batch random_batch(std::size_t samples, std::size_t steps, std::size_t outputs, std::uint64_t seed) {
    rvf::CounterRng rng(seed);
    rvf::neural::Batch b;
    b.inputs.assign(steps, Eigen::MatrixXd(1, static_cast<Eigen::Index>(samples)));
    for (auto& x : b.inputs)
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(0, j) = 2.0 * rng.uniform() - 1.0;
    b.targets.resize(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(samples));
    for (Eigen::Index j = 0; j < b.targets.size(); ++j) b.targets.data()[j] = 2.0 * rng.uniform() - 1.0;
    return b;
}

/// Glorot-initialised model with small random biases so no gradient is
/// structurally zero.
inline rvf::neural::RecurrentModel random_model(const rvf::neural::Architecture& arch, std::uint64_t seed) {
    rvf::CounterRng rng(seed);
    auto m = rvf::neural::initialize(arch, rng.split("w"));
    auto brng = rng.split("b");
    for (auto& t : m.tensors())
        if (t.name.front() == 'b')
            for (Eigen::Index i = 0; i < t.value.size(); ++i) t.value.data()[i] = 0.2 * (brng.uniform() - 0.5);
    return m;
}

} // namespace gradcheck
