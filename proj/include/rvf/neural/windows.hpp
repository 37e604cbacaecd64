#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace rvf::neural {

/// Supervised pairs cut from one series. `inputs` is [samples, sequence_length,
/// features] and `targets` is [samples, output_days], both row-major.
struct WindowedDataset {
    std::size_t samples = 0;
    std::size_t sequence_length = 0;
    std::size_t features = 1;
    std::size_t output_days = 1;
    std::vector<double> inputs;
    std::vector<double> targets;

    double input(std::size_t sample, std::size_t step, std::size_t feature = 0) const {
        return inputs[(sample * sequence_length + step) * features + feature];
    }
    double target(std::size_t sample, std::size_t day) const { return targets[sample * output_days + day]; }
};

/// Sample i: inputs values[i .. i+seq-1], targets values[i+seq .. i+seq+out-1].
inline WindowedDataset make_windows(std::span<const double> values, std::size_t sequence_length = 12,
                                    std::size_t output_days = 1) {
    if (sequence_length == 0 || output_days == 0) throw std::invalid_argument("make_windows: lengths must be positive");
    if (values.size() < sequence_length + output_days) throw std::invalid_argument("make_windows: series too short");
    WindowedDataset d;
    d.sequence_length = sequence_length;
    d.output_days = output_days;
    d.samples = values.size() - sequence_length - output_days + 1;
    d.inputs.reserve(d.samples * sequence_length);
    d.targets.reserve(d.samples * output_days);
    for (std::size_t i = 0; i < d.samples; ++i) {
        d.inputs.insert(d.inputs.end(), values.begin() + i, values.begin() + i + sequence_length);
        d.targets.insert(d.targets.end(), values.begin() + i + sequence_length,
                         values.begin() + i + sequence_length + output_days);
    }
    return d;
}

/// A mini-batch in the layout the network consumes: one [features x batch]
/// matrix per time step, targets [output_days x batch].
struct Batch {
    std::vector<Eigen::MatrixXd> inputs;
    Eigen::MatrixXd targets;

    std::size_t size() const noexcept { return static_cast<std::size_t>(targets.cols()); }
};

inline Batch gather(const WindowedDataset& d, std::span<const std::size_t> rows) {
    const auto b = static_cast<Eigen::Index>(rows.size());
    Batch out;
    out.inputs.assign(d.sequence_length, Eigen::MatrixXd(static_cast<Eigen::Index>(d.features), b));
    out.targets.resize(static_cast<Eigen::Index>(d.output_days), b);
    for (Eigen::Index j = 0; j < b; ++j) {
        const std::size_t s = rows[static_cast<std::size_t>(j)];
        for (std::size_t t = 0; t < d.sequence_length; ++t)
            for (std::size_t f = 0; f < d.features; ++f) out.inputs[t](static_cast<Eigen::Index>(f), j) = d.input(s, t, f);
        for (std::size_t k = 0; k < d.output_days; ++k) out.targets(static_cast<Eigen::Index>(k), j) = d.target(s, k);
    }
    return out;
}

/// Single unbatched sequence (one feature) as network input.
inline std::vector<Eigen::MatrixXd> sequence_input(std::span<const double> seq) {
    std::vector<Eigen::MatrixXd> xs(seq.size(), Eigen::MatrixXd(1, 1));
    for (std::size_t t = 0; t < seq.size(); ++t) xs[t](0, 0) = seq[t];
    return xs;
}

} // namespace rvf::neural
