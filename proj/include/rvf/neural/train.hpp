#pragma once

// Mini-batch training loop and inference for the recurrent forecasters.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "rvf/neural/adam.hpp"
#include "rvf/neural/backprop.hpp"
#include "rvf/neural/model.hpp"
#include "rvf/neural/scaler.hpp"
#include "rvf/neural/windows.hpp"
#include "rvf/rng.hpp"

namespace rvf::neural {

struct TrainConfig {
    double learning_rate = 1e-4;
    std::size_t epochs = 50;
    std::size_t batch_size = 16;
    std::size_t early_stop_patience = 5;
    double early_stop_min_delta = 1e-7;
    double clip_norm = 1.0;  ///< global gradient norm cap; <= 0 disables
    bool shuffle = true;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(learning_rate > 0.0) || batch_size == 0 || early_stop_patience == 0)
            throw std::invalid_argument("train config: learning rate, batch size and patience must be positive");
    }
};

/// Architecture and schedule for each cell kind: GRU 16 units -> dense 4
/// (leaky ReLU) -> output, 50 epochs, batch 64; LSTM 8 units -> output,
/// 50 epochs, batch 16; RNN as LSTM with 30 epochs. Dropout 0.2, lr 1e-4.
struct NeuralSpec {
    Architecture architecture;
    TrainConfig config;
    std::size_t sequence_length = 12;
};

inline NeuralSpec default_spec(CellKind kind, std::size_t output_days = 1) {
    NeuralSpec s;
    s.architecture.kind = kind;
    s.architecture.output_days = output_days;
    s.architecture.dropout_rate = 0.2;
    switch (kind) {
    case CellKind::gru:
        s.architecture.hidden_units = 16;
        s.architecture.dense_units = 4;
        s.config.epochs = 50;
        s.config.batch_size = 64;
        break;
    case CellKind::lstm:
        s.architecture.hidden_units = 8;
        s.config.epochs = 50;
        s.config.batch_size = 16;
        break;
    case CellKind::rnn:
        s.architecture.hidden_units = 8;
        s.config.epochs = 30;
        s.config.batch_size = 16;
        break;
    }
    return s;
}

struct TrainResult {
    RecurrentModel model;
    std::vector<double> loss_history; ///< per-epoch mean training MSE
    bool stopped_early = false;
};

/// Inverted dropout mask: keep with probability 1 - rate, kept entries scaled by 1/(1 - rate).
inline Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, CounterRng& rng) {
    Eigen::MatrixXd mask(rows, cols);
    const double keep = 1.0 - rate;
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) mask(i, j) = rng.uniform() < keep ? 1.0 / keep : 0.0;
    return mask;
}

/// Starts from `initial` when given, otherwise from a seeded initialisation.
/// Training stops early once the epoch loss fails to improve on the best so
/// far by at least min_delta for `patience` consecutive epochs.
inline TrainResult train(const Architecture& arch, const WindowedDataset& data, const TrainConfig& config,
                         const RecurrentModel* initial = nullptr) {
    config.validate();
    arch.validate();
    if (data.samples == 0) throw std::invalid_argument("train: empty dataset");
    if (data.features != arch.input_features || data.output_days != arch.output_days)
        throw std::invalid_argument("train: dataset shape does not match the architecture");

    const CounterRng root(config.seed);
    TrainResult out;
    out.model = initial ? *initial : initialize(arch, root.split("init"));
    AdamState adam(out.model);
    const AdamOptions adam_opts{.learning_rate = config.learning_rate};
    CounterRng shuffle_rng = root.split("shuffle");
    CounterRng dropout_rng = root.split("dropout");

    std::vector<std::size_t> order(data.samples);
    std::iota(order.begin(), order.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    std::size_t stale = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) std::shuffle(order.begin(), order.end(), shuffle_rng);
        double total = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            const auto batch = gather(data, std::span<const std::size_t>(order).subspan(start, stop - start));
            Eigen::MatrixXd mask;
            if (arch.dropout_rate > 0.0)
                mask = dropout_mask(static_cast<Eigen::Index>(arch.hidden_units), static_cast<Eigen::Index>(batch.size()),
                                    arch.dropout_rate, dropout_rng);
            auto grads = backprop(out.model, batch, mask.size() > 0 ? &mask : nullptr);
            total += grads.loss * static_cast<double>(batch.size());
            if (config.clip_norm > 0.0) clip_global_norm(grads, config.clip_norm);
            adam_step(out.model, adam, grads, adam_opts);
        }
        const double epoch_loss = total / static_cast<double>(data.samples);
        out.loss_history.push_back(epoch_loss);
        if (epoch_loss < best - config.early_stop_min_delta) {
            best = epoch_loss;
            stale = 0;
        } else if (++stale >= config.early_stop_patience) {
            out.stopped_early = true;
            break;
        }
    }
    return out;
}

/// Scales `recent` with the training scaler, runs inference (no dropout) and
/// maps the head's outputs back to original units.
inline std::vector<double> predict(const RecurrentModel& model, const RangeScaler& scaler, std::span<const double> recent,
                                   std::size_t sequence_length = 12) {
    if (recent.size() != sequence_length)
        throw std::invalid_argument("predict: expected exactly " + std::to_string(sequence_length) + " recent values");
    const auto xs = sequence_input(scaler.transform(recent));
    const auto fc = forward(model, xs);
    std::vector<double> out(static_cast<std::size_t>(fc.output.rows()));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = scaler.inverse(fc.output(static_cast<Eigen::Index>(k), 0));
    return out;
}

} // namespace rvf::neural
