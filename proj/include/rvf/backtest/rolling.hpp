#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rvf/econometric/common.hpp"
#include "rvf/series.hpp"

namespace rvf::backtest {

struct RollingSpec {
    std::size_t window_size = 4077;
    std::vector<std::size_t> horizons{1};
    std::size_t refit_every = 1;

    std::size_t max_horizon() const { return *std::max_element(horizons.begin(), horizons.end()); }
    std::size_t min_horizon() const { return *std::min_element(horizons.begin(), horizons.end()); }

    void validate() const {
        if (window_size < 30) throw std::invalid_argument("rolling: window_size must be >= 30");
        if (horizons.empty()) throw std::invalid_argument("rolling: horizons must be nonempty");
        for (auto h : horizons)
            if (h < 1) throw std::invalid_argument("rolling: horizons must be >= 1");
        if (refit_every < 1) throw std::invalid_argument("rolling: refit_every must be >= 1");
    }
};

/// The trailing window a model may look at: rv (and returns, if supplied)
/// restricted to [begin, begin + rv.size()) of the full series.
struct WindowView {
    std::span<const double> rv;
    std::span<const double> returns; ///< empty when no return series is available
    std::size_t begin = 0;
};

class Forecaster {
public:
    virtual ~Forecaster() = default;
    /// Re-estimate on the window.
    virtual void fit(const WindowView& window) = 0;
    /// Forecasts for the `steps` observations following the window.
    virtual std::vector<double> forecast(const WindowView& window, std::size_t steps) = 0;
};

struct ForecastRecord {
    Timestamp target;
    std::size_t target_index = 0;
    double predicted = 0.0;
    double actual = 0.0;
    std::size_t fit_begin = 0; ///< estimation window of the fit in force, [fit_begin, fit_end)
    std::size_t fit_end = 0;
    std::size_t info_end = 0; ///< forecast conditioned on observations [.., info_end)
};

struct ForecastSet {
    std::string model;
    std::size_t horizon = 0;
    std::vector<ForecastRecord> records;
    std::size_t floored = 0; ///< non-positive predictions lifted to the variance floor
    std::size_t refit_every = 1;
    std::size_t fits = 0;
};

/// Records per horizon: n - window - h + 1.
inline std::size_t expected_records(std::size_t n, std::size_t window, std::size_t h) {
    return n >= window + h ? n - window - h + 1 : 0;
}

/// Origins o = window .. n - h_min. At each origin the forecaster sees
/// observations [o - window, o) only, is refit when (o - window) is a
/// multiple of refit_every, and one forecast path serves every horizon
/// (target index o - 1 + h).
inline std::vector<ForecastSet> rolling_forecast(Forecaster& model, const std::string& name, const RvSeries& rv,
                                                 std::span<const double> returns, const RollingSpec& spec) {
    spec.validate();
    const std::size_t n = rv.values.size();
    if (!returns.empty() && returns.size() != n)
        throw std::invalid_argument("rolling: returns and RV are misaligned");
    const std::size_t w = spec.window_size, hmax = spec.max_horizon();
    if (n <= w + hmax)
        throw std::invalid_argument("rolling: series of length " + std::to_string(n) + " is too short for window " +
                                    std::to_string(w) + " and horizon " + std::to_string(hmax));

    std::vector<ForecastSet> out(spec.horizons.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j].model = name;
        out[j].horizon = spec.horizons[j];
        out[j].refit_every = spec.refit_every;
        out[j].records.reserve(expected_records(n, w, spec.horizons[j]));
    }

    const std::span<const double> all(rv.values);
    std::size_t fit_begin = 0, fit_end = 0, fits = 0;
    for (std::size_t o = w; o + spec.min_horizon() <= n; ++o) {
        WindowView view{all.subspan(o - w, w), returns.empty() ? returns : returns.subspan(o - w, w), o - w};
        if ((o - w) % spec.refit_every == 0) {
            model.fit(view);
            fit_begin = o - w;
            fit_end = o;
            ++fits;
        }
        const auto path = model.forecast(view, hmax);
        if (path.size() < hmax) throw std::logic_error("rolling: forecaster returned a short path");
        for (auto& set : out) {
            const std::size_t target = o - 1 + set.horizon;
            if (target >= n) continue;
            double p = path[set.horizon - 1];
            if (!std::isfinite(p))
                throw std::domain_error("rolling: " + name + " produced a non-finite forecast for index " +
                                        std::to_string(target));
            if (p <= 0.0) {
                p = econometric::kVarianceFloor;
                ++set.floored;
            }
            set.records.push_back({rv.timestamps[target], target, p, rv.values[target], fit_begin, fit_end, o});
        }
    }
    for (auto& set : out) set.fits = fits;
    return out;
}

} // namespace rvf::backtest
