#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

namespace rvf::neural {

/// Min-max scaling fitted on training data only; values outside the fitted
/// range map outside [0, 1].
struct RangeScaler {
    double observed_min = 0.0;
    double observed_max = 1.0;

    static RangeScaler fit(std::span<const double> train) {
        if (train.empty()) throw std::invalid_argument("RangeScaler: empty training data");
        const auto [lo, hi] = std::minmax_element(train.begin(), train.end());
        if (!(*hi > *lo)) throw std::invalid_argument("RangeScaler: constant training series");
        return {*lo, *hi};
    }

    double transform(double x) const noexcept { return (x - observed_min) / (observed_max - observed_min); }
    double inverse(double y) const noexcept { return observed_min + y * (observed_max - observed_min); }

    std::vector<double> transform(std::span<const double> xs) const {
        std::vector<double> out(xs.size());
        std::transform(xs.begin(), xs.end(), out.begin(), [this](double x) { return transform(x); });
        return out;
    }
};

struct ScaledSeries {
    RangeScaler scaler;
    std::vector<double> values;
};

inline ScaledSeries scaler_fit_transform(std::span<const double> train) {
    ScaledSeries out;
    out.scaler = RangeScaler::fit(train);
    out.values = out.scaler.transform(train);
    return out;
}

} // namespace rvf::neural
