#pragma once

// Analytic gradients of the batch-mean squared error by backpropagation
// through time over the whole input sequence.

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rvf/neural/model.hpp"
#include "rvf/neural/windows.hpp"

namespace rvf::neural {

struct Gradients {
    double loss = 0.0;                     ///< loss_scale * mean((y - target)^2)
    std::vector<Eigen::MatrixXd> d;        ///< same order and shapes as the model tensors

    double squared_norm() const {
        double s = 0.0;
        for (const auto& g : d) s += g.squaredNorm();
        return s;
    }
};

/// Mean squared error over every output unit and sample of the batch.
inline double mse(const Eigen::MatrixXd& output, const Eigen::MatrixXd& targets) {
    return (output - targets).squaredNorm() / static_cast<double>(output.size());
}

inline Gradients backprop(const RecurrentModel& m, const Batch& batch, const Eigen::MatrixXd* dropout_mask = nullptr,
                          double loss_scale = 1.0) {
    if (batch.size() == 0) throw std::invalid_argument("backprop: empty batch");
    const auto& arch = m.architecture();
    if (batch.targets.rows() != static_cast<Eigen::Index>(arch.output_days))
        throw std::invalid_argument("backprop: target shape mismatch");
    const auto fc = forward(m, batch.inputs, dropout_mask);

    Gradients g;
    g.d.reserve(m.tensors().size());
    for (const auto& t : m.tensors()) g.d.push_back(Eigen::MatrixXd::Zero(t.value.rows(), t.value.cols()));

    const Eigen::MatrixXd diff = fc.output - batch.targets;
    g.loss = loss_scale * diff.squaredNorm() / static_cast<double>(diff.size());
    Eigen::MatrixXd dy = (2.0 * loss_scale / static_cast<double>(diff.size())) * diff;

    // Head.
    std::size_t k = m.head_offset();
    Eigen::MatrixXd dh;
    if (arch.dense_units > 0) {
        g.d[k + 2].noalias() = dy * fc.dense_out.transpose();
        g.d[k + 3] = dy.rowwise().sum();
        Eigen::MatrixXd da = m[k + 2].transpose() * dy;
        const double slope = arch.leaky_slope;
        da.array() *= fc.dense_pre.unaryExpr([slope](double v) { return v > 0.0 ? 1.0 : slope; }).array();
        g.d[k].noalias() = da * fc.head_input.transpose();
        g.d[k + 1] = da.rowwise().sum();
        dh = m[k].transpose() * da;
    } else {
        g.d[k].noalias() = dy * fc.head_input.transpose();
        g.d[k + 1] = dy.rowwise().sum();
        dh = m[k].transpose() * dy;
    }
    if (fc.dropout_mask.size() > 0) dh.array() *= fc.dropout_mask.array();

    // Recurrence, newest step first.
    const std::size_t T = batch.inputs.size();
    const auto& xs = batch.inputs;
    auto accumulate = [&](std::size_t w, std::size_t u, std::size_t b, const Eigen::MatrixXd& da,
                          const Eigen::MatrixXd& x, const Eigen::MatrixXd& hprev) {
        g.d[w].noalias() += da * x.transpose();
        g.d[u].noalias() += da * hprev.transpose();
        g.d[b] += da.rowwise().sum();
    };

    switch (arch.kind) {
    case CellKind::rnn:
        for (std::size_t t = T; t-- > 0;) {
            const Eigen::MatrixXd da = (dh.array() * (1.0 - fc.h[t + 1].array().square())).matrix();
            accumulate(0, 1, 2, da, xs[t], fc.h[t]);
            dh.noalias() = m[1].transpose() * da;
        }
        break;
    case CellKind::lstm: {
        Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(dh.rows(), dh.cols());
        for (std::size_t t = T; t-- > 0;) {
            const auto& f = fc.gate_a[t].array();
            const auto& i = fc.gate_b[t].array();
            const auto& o = fc.gate_c[t].array();
            const auto& gc = fc.gate_d[t].array();
            const Eigen::ArrayXXd tc = fc.c[t + 1].array().tanh();
            dc.array() += dh.array() * o * (1.0 - tc.square());
            const Eigen::MatrixXd da_f = (dc.array() * fc.c[t].array() * f * (1.0 - f)).matrix();
            const Eigen::MatrixXd da_i = (dc.array() * gc * i * (1.0 - i)).matrix();
            const Eigen::MatrixXd da_o = (dh.array() * tc * o * (1.0 - o)).matrix();
            const Eigen::MatrixXd da_c = (dc.array() * i * (1.0 - gc.square())).matrix();
            accumulate(0, 1, 2, da_f, xs[t], fc.h[t]);
            accumulate(3, 4, 5, da_i, xs[t], fc.h[t]);
            accumulate(6, 7, 8, da_o, xs[t], fc.h[t]);
            accumulate(9, 10, 11, da_c, xs[t], fc.h[t]);
            dc.array() *= f;
            dh.noalias() = m[1].transpose() * da_f;
            dh.noalias() += m[4].transpose() * da_i;
            dh.noalias() += m[7].transpose() * da_o;
            dh.noalias() += m[10].transpose() * da_c;
        }
        break;
    }
    case CellKind::gru:
        for (std::size_t t = T; t-- > 0;) {
            const auto& z = fc.gate_a[t].array();
            const auto& r = fc.gate_b[t].array();
            const auto& cand = fc.gate_c[t].array();
            const auto& hp = fc.h[t].array();
            const Eigen::MatrixXd da_c = (dh.array() * z * (1.0 - cand.square())).matrix();
            const Eigen::MatrixXd da_z = (dh.array() * (cand - hp) * z * (1.0 - z)).matrix();
            const Eigen::MatrixXd rh = (r * hp).matrix();
            g.d[6].noalias() += da_c * xs[t].transpose();
            g.d[7].noalias() += da_c * rh.transpose();
            g.d[8] += da_c.rowwise().sum();
            const Eigen::MatrixXd drh = m[7].transpose() * da_c;
            const Eigen::MatrixXd da_r = (drh.array() * hp * r * (1.0 - r)).matrix();
            accumulate(0, 1, 2, da_z, xs[t], fc.h[t]);
            accumulate(3, 4, 5, da_r, xs[t], fc.h[t]);
            Eigen::MatrixXd dprev = (dh.array() * (1.0 - z) + drh.array() * r).matrix();
            dprev.noalias() += m[1].transpose() * da_z;
            dprev.noalias() += m[4].transpose() * da_r;
            dh = std::move(dprev);
        }
        break;
    }
    return g;
}

} // namespace rvf::neural
