#pragma once

// Recurrent networks (Elman RNN, LSTM, GRU) with a dense head, forward pass.
//
// Tensors use the column-per-sample convention: inputs are [features x batch],
// hidden states [hidden x batch]. Weight names:
//   RNN : W_xh, W_hh, b_h            h_t = tanh(W_xh x_t + W_hh h_{t-1} + b_h)
//   LSTM: W_g, U_g, b_g for g in f, i, o, c (forget, input, output, candidate)
//   GRU : W_z, U_z, b_z, W_r, U_r, b_r, W, U, b
//         z = sig(W_z x + U_z h), r = sig(W_r x + U_r h),
//         h~ = tanh(W x + U (r * h)), h_t = (1 - z) h_{t-1} + z h~
//   head: [W_d, b_d, leaky-ReLU]  W_y, b_y

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rvf/rng.hpp"

namespace rvf::neural {

enum class CellKind { rnn, lstm, gru };

inline std::string_view to_string(CellKind k) {
    switch (k) {
    case CellKind::rnn: return "rnn";
    case CellKind::lstm: return "lstm";
    case CellKind::gru: return "gru";
    }
    return "unknown";
}

inline CellKind parse_cell_kind(std::string_view s) {
    if (s == "rnn") return CellKind::rnn;
    if (s == "lstm") return CellKind::lstm;
    if (s == "gru") return CellKind::gru;
    throw std::invalid_argument("unknown recurrent cell '" + std::string(s) + "'");
}

struct Architecture {
    CellKind kind = CellKind::rnn;
    std::size_t input_features = 1;
    std::size_t hidden_units = 8;
    std::size_t dense_units = 0; ///< 0 means the recurrent state feeds the output layer directly
    std::size_t output_days = 1;
    double dropout_rate = 0.0;   ///< on the final hidden state, training only
    double leaky_slope = 0.3;

    void validate() const {
        if (input_features == 0 || hidden_units == 0 || output_days == 0)
            throw std::invalid_argument("architecture: sizes must be positive");
        if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
            throw std::invalid_argument("architecture: dropout rate must lie in [0, 1)");
    }
};

struct Tensor {
    std::string name;
    Eigen::MatrixXd value;
};

inline std::size_t cell_tensor_count(CellKind k) {
    switch (k) {
    case CellKind::rnn: return 3;
    case CellKind::lstm: return 12;
    case CellKind::gru: return 9;
    }
    return 0;
}

class RecurrentModel {
public:
    RecurrentModel() = default;

    /// All parameters zero-initialised with shapes fixed by `arch`.
    explicit RecurrentModel(const Architecture& arch) : arch_(arch) {
        arch_.validate();
        const auto H = static_cast<Eigen::Index>(arch.hidden_units);
        const auto F = static_cast<Eigen::Index>(arch.input_features);
        const auto D = static_cast<Eigen::Index>(arch.dense_units);
        const auto O = static_cast<Eigen::Index>(arch.output_days);
        auto add = [this](std::string name, Eigen::Index r, Eigen::Index c) {
            tensors_.push_back({std::move(name), Eigen::MatrixXd::Zero(r, c)});
        };
        switch (arch.kind) {
        case CellKind::rnn:
            add("W_xh", H, F);
            add("W_hh", H, H);
            add("b_h", H, 1);
            break;
        case CellKind::lstm:
            for (const char* g : {"f", "i", "o", "c"}) {
                add(std::string("W_") + g, H, F);
                add(std::string("U_") + g, H, H);
                add(std::string("b_") + g, H, 1);
            }
            break;
        case CellKind::gru:
            for (const char* g : {"z", "r"}) {
                add(std::string("W_") + g, H, F);
                add(std::string("U_") + g, H, H);
                add(std::string("b_") + g, H, 1);
            }
            add("W", H, F);
            add("U", H, H);
            add("b", H, 1);
            break;
        }
        if (D > 0) {
            add("W_d", D, H);
            add("b_d", D, 1);
            add("W_y", O, D);
        } else {
            add("W_y", O, H);
        }
        add("b_y", O, 1);
    }

    const Architecture& architecture() const noexcept { return arch_; }
    std::vector<Tensor>& tensors() noexcept { return tensors_; }
    const std::vector<Tensor>& tensors() const noexcept { return tensors_; }

    Eigen::MatrixXd& operator[](std::size_t i) { return tensors_[i].value; }
    const Eigen::MatrixXd& operator[](std::size_t i) const { return tensors_[i].value; }

    std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < tensors_.size(); ++i)
            if (tensors_[i].name == name) return i;
        throw std::out_of_range("no tensor named '" + std::string(name) + "'");
    }
    Eigen::MatrixXd& param(std::string_view name) { return tensors_[index_of(name)].value; }
    const Eigen::MatrixXd& param(std::string_view name) const { return tensors_[index_of(name)].value; }

    std::size_t head_offset() const noexcept { return cell_tensor_count(arch_.kind); }

    std::size_t parameter_count() const noexcept {
        std::size_t n = 0;
        for (const auto& t : tensors_) n += static_cast<std::size_t>(t.value.size());
        return n;
    }

private:
    Architecture arch_;
    std::vector<Tensor> tensors_;
};

/// Weights uniform in +-sqrt(6 / (fan_in + fan_out)); biases zero.
inline RecurrentModel initialize(const Architecture& arch, CounterRng rng) {
    RecurrentModel m(arch);
    for (auto& t : m.tensors()) {
        if (t.name.front() == 'b') continue;
        const double limit = std::sqrt(6.0 / static_cast<double>(t.value.rows() + t.value.cols()));
        for (Eigen::Index j = 0; j < t.value.cols(); ++j)
            for (Eigen::Index i = 0; i < t.value.rows(); ++i) t.value(i, j) = limit * (2.0 * rng.uniform() - 1.0);
    }
    return m;
}

namespace detail {

inline Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& a) {
    return (1.0 + (-a.array()).exp()).inverse().matrix();
}

inline Eigen::MatrixXd tanh(const Eigen::MatrixXd& a) { return a.array().tanh().matrix(); }

/// W x + U h + b, bias broadcast over the batch.
inline Eigen::MatrixXd affine(const Eigen::MatrixXd& W, const Eigen::MatrixXd& x, const Eigen::MatrixXd& U,
                              const Eigen::MatrixXd& h, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd a = W * x;
    a.noalias() += U * h;
    a.colwise() += b.col(0);
    return a;
}

} // namespace detail

/// Everything backprop needs from a forward pass. Per-step vectors have
/// T entries except `h` and `c`, which hold the initial state at index 0.
struct ForwardCache {
    std::vector<Eigen::MatrixXd> h;
    std::vector<Eigen::MatrixXd> c;    ///< LSTM only
    std::vector<Eigen::MatrixXd> gate_a; ///< LSTM forget / GRU update (z)
    std::vector<Eigen::MatrixXd> gate_b; ///< LSTM input / GRU reset (r)
    std::vector<Eigen::MatrixXd> gate_c; ///< LSTM output / GRU candidate (h~)
    std::vector<Eigen::MatrixXd> gate_d; ///< LSTM candidate
    Eigen::MatrixXd dropout_mask;        ///< empty when dropout is inactive
    Eigen::MatrixXd head_input;          ///< final hidden state after dropout
    Eigen::MatrixXd dense_pre;           ///< dense pre-activation (if any)
    Eigen::MatrixXd dense_out;
    Eigen::MatrixXd output;              ///< [output_days x batch]
};

struct InitialState {
    std::optional<Eigen::MatrixXd> h;
    std::optional<Eigen::MatrixXd> c;
};

/// Runs the recurrence over `xs` and applies the head. A non-null
/// `dropout_mask` ([hidden x batch], entries 0 or 1/(1-rate)) multiplies the
/// final hidden state.
inline ForwardCache forward(const RecurrentModel& m, const std::vector<Eigen::MatrixXd>& xs,
                            const Eigen::MatrixXd* dropout_mask = nullptr, const InitialState& init = {}) {
    const auto& arch = m.architecture();
    if (xs.empty()) throw std::invalid_argument("forward: empty input sequence");
    const auto B = xs.front().cols();
    const auto H = static_cast<Eigen::Index>(arch.hidden_units);
    for (const auto& x : xs)
        if (x.rows() != static_cast<Eigen::Index>(arch.input_features) || x.cols() != B)
            throw std::invalid_argument("forward: input shape mismatch");
    if (dropout_mask && (dropout_mask->rows() != H || dropout_mask->cols() != B))
        throw std::invalid_argument("forward: dropout mask shape mismatch");

    ForwardCache fc;
    const std::size_t T = xs.size();
    fc.h.reserve(T + 1);
    fc.h.push_back(init.h ? *init.h : Eigen::MatrixXd::Zero(H, B));
    if (fc.h.front().rows() != H || fc.h.front().cols() != B) throw std::invalid_argument("forward: initial state shape mismatch");

    switch (arch.kind) {
    case CellKind::rnn:
        for (std::size_t t = 0; t < T; ++t)
            fc.h.push_back(detail::tanh(detail::affine(m[0], xs[t], m[1], fc.h[t], m[2])));
        break;
    case CellKind::lstm: {
        fc.c.push_back(init.c ? *init.c : Eigen::MatrixXd::Zero(H, B));
        for (std::size_t t = 0; t < T; ++t) {
            const auto& hp = fc.h[t];
            Eigen::MatrixXd f = detail::sigmoid(detail::affine(m[0], xs[t], m[1], hp, m[2]));
            Eigen::MatrixXd i = detail::sigmoid(detail::affine(m[3], xs[t], m[4], hp, m[5]));
            Eigen::MatrixXd o = detail::sigmoid(detail::affine(m[6], xs[t], m[7], hp, m[8]));
            Eigen::MatrixXd g = detail::tanh(detail::affine(m[9], xs[t], m[10], hp, m[11]));
            Eigen::MatrixXd c = (f.array() * fc.c[t].array() + i.array() * g.array()).matrix();
            fc.h.push_back((o.array() * c.array().tanh()).matrix());
            fc.c.push_back(std::move(c));
            fc.gate_a.push_back(std::move(f));
            fc.gate_b.push_back(std::move(i));
            fc.gate_c.push_back(std::move(o));
            fc.gate_d.push_back(std::move(g));
        }
        break;
    }
    case CellKind::gru:
        for (std::size_t t = 0; t < T; ++t) {
            const auto& hp = fc.h[t];
            Eigen::MatrixXd z = detail::sigmoid(detail::affine(m[0], xs[t], m[1], hp, m[2]));
            Eigen::MatrixXd r = detail::sigmoid(detail::affine(m[3], xs[t], m[4], hp, m[5]));
            const Eigen::MatrixXd rh = (r.array() * hp.array()).matrix();
            Eigen::MatrixXd cand = detail::tanh(detail::affine(m[6], xs[t], m[7], rh, m[8]));
            fc.h.push_back(((1.0 - z.array()) * hp.array() + z.array() * cand.array()).matrix());
            fc.gate_a.push_back(std::move(z));
            fc.gate_b.push_back(std::move(r));
            fc.gate_c.push_back(std::move(cand));
        }
        break;
    }

    fc.head_input = fc.h.back();
    if (dropout_mask) {
        fc.dropout_mask = *dropout_mask;
        fc.head_input.array() *= dropout_mask->array();
    }
    std::size_t k = m.head_offset();
    const Eigen::MatrixXd* top = &fc.head_input;
    if (arch.dense_units > 0) {
        fc.dense_pre = m[k] * fc.head_input;
        fc.dense_pre.colwise() += m[k + 1].col(0);
        const double slope = arch.leaky_slope;
        fc.dense_out = fc.dense_pre.unaryExpr([slope](double v) { return v > 0.0 ? v : slope * v; });
        top = &fc.dense_out;
        k += 2;
    }
    fc.output = m[k] * *top;
    fc.output.colwise() += m[k + 1].col(0);
    return fc;
}

/// Per-step states of a single sequence, as plain vectors.
struct SequenceTrace {
    std::vector<Eigen::VectorXd> hidden; ///< h_1..h_T
    std::vector<Eigen::VectorXd> cell;   ///< LSTM C_1..C_T
    std::vector<Eigen::VectorXd> forget_gate, input_gate, output_gate; ///< LSTM
    std::vector<Eigen::VectorXd> update_gate, reset_gate, candidate;   ///< GRU
    Eigen::VectorXd output;
};

inline SequenceTrace trace(const RecurrentModel& m, const std::vector<Eigen::MatrixXd>& xs, const InitialState& init = {}) {
    const auto fc = forward(m, xs, nullptr, init);
    SequenceTrace tr;
    for (std::size_t t = 1; t < fc.h.size(); ++t) tr.hidden.push_back(fc.h[t].col(0));
    if (m.architecture().kind == CellKind::lstm) {
        for (std::size_t t = 1; t < fc.c.size(); ++t) tr.cell.push_back(fc.c[t].col(0));
        for (std::size_t t = 0; t < fc.gate_a.size(); ++t) {
            tr.forget_gate.push_back(fc.gate_a[t].col(0));
            tr.input_gate.push_back(fc.gate_b[t].col(0));
            tr.output_gate.push_back(fc.gate_c[t].col(0));
        }
    } else if (m.architecture().kind == CellKind::gru) {
        for (std::size_t t = 0; t < fc.gate_a.size(); ++t) {
            tr.update_gate.push_back(fc.gate_a[t].col(0));
            tr.reset_gate.push_back(fc.gate_b[t].col(0));
            tr.candidate.push_back(fc.gate_c[t].col(0));
        }
    }
    tr.output = fc.output.col(0);
    return tr;
}

inline SequenceTrace rnn_forward(const RecurrentModel& m, const std::vector<Eigen::MatrixXd>& xs, const InitialState& init = {}) {
    if (m.architecture().kind != CellKind::rnn) throw std::invalid_argument("rnn_forward: model is not an RNN");
    return trace(m, xs, init);
}

inline SequenceTrace lstm_forward(const RecurrentModel& m, const std::vector<Eigen::MatrixXd>& xs, const InitialState& init = {}) {
    if (m.architecture().kind != CellKind::lstm) throw std::invalid_argument("lstm_forward: model is not an LSTM");
    return trace(m, xs, init);
}

inline SequenceTrace gru_forward(const RecurrentModel& m, const std::vector<Eigen::MatrixXd>& xs, const InitialState& init = {}) {
    if (m.architecture().kind != CellKind::gru) throw std::invalid_argument("gru_forward: model is not a GRU");
    return trace(m, xs, init);
}

} // namespace rvf::neural
