#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "rvf/neural/backprop.hpp"
#include "rvf/neural/model.hpp"

namespace rvf::neural {

struct AdamOptions {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    std::vector<Eigen::MatrixXd> m;
    std::vector<Eigen::MatrixXd> v;
    std::size_t step = 0;

    explicit AdamState(const RecurrentModel& model) {
        for (const auto& t : model.tensors()) {
            m.push_back(Eigen::MatrixXd::Zero(t.value.rows(), t.value.cols()));
            v.push_back(Eigen::MatrixXd::Zero(t.value.rows(), t.value.cols()));
        }
    }
};

/// One Adam update with bias correction folded into the step size:
///   lr_t = lr sqrt(1 - b2^t) / (1 - b1^t),  w -= lr_t m / (sqrt(v) + eps).
/// On the first step this moves each weight by lr g / (|g| + eps sqrt(1/(1-b2))).
inline void adam_step(RecurrentModel& model, AdamState& state, const Gradients& grads, const AdamOptions& opts = {}) {
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double lr_t = opts.learning_rate * std::sqrt(1.0 - std::pow(opts.beta2, t)) / (1.0 - std::pow(opts.beta1, t));
    for (std::size_t i = 0; i < grads.d.size(); ++i) {
        const auto& g = grads.d[i].array();
        state.m[i].array() = opts.beta1 * state.m[i].array() + (1.0 - opts.beta1) * g;
        state.v[i].array() = opts.beta2 * state.v[i].array() + (1.0 - opts.beta2) * g.square();
        model[i].array() -= lr_t * state.m[i].array() / (state.v[i].array().sqrt() + opts.epsilon);
    }
}

/// Rescales all gradients together so their global L2 norm is at most `max_norm`.
inline void clip_global_norm(Gradients& grads, double max_norm) {
    const double norm = std::sqrt(grads.squared_norm());
    if (norm > max_norm) {
        const double s = max_norm / norm;
        for (auto& g : grads.d) g *= s;
    }
}

} // namespace rvf::neural
