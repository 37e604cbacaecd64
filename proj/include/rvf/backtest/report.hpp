#pragma once

#include <ostream>
#include <string>

#include "rvf/backtest/runner.hpp"
#include "rvf/series.hpp"
#include "rvf/vendor_json.hpp"

namespace rvf::backtest {

inline constexpr std::array<std::string_view, 6> kLossFamilies{"mse", "rmse", "mape", "mae", "qlike_paper",
                                                               "qlike_canonical"};

inline double loss_value(const LossCell& c, std::string_view family) {
    if (family == "mse") return c.point.mse;
    if (family == "rmse") return c.point.rmse;
    if (family == "mape") return c.point.mape;
    if (family == "mae") return c.point.mae;
    if (family == "qlike_paper") return c.qlike_paper.value;
    if (family == "qlike_canonical") return c.qlike_canonical.value;
    throw std::invalid_argument("unknown loss family '" + std::string(family) + "'");
}

inline std::string horizon_label(std::size_t h, Frequency f) {
    return std::to_string(h) + (f == Frequency::daily ? "d" : "h");
}

/// Loss-family major, one row per model, one column per horizon.
inline void write_loss_csv(std::ostream& os, const LossTable& t, Frequency f = Frequency::daily) {
    os << "loss,model";
    for (auto h : t.horizons) os << ',' << horizon_label(h, f);
    os << '\n';
    for (auto family : kLossFamilies)
        for (const auto& m : t.models) {
            os << family << ',' << m;
            for (auto h : t.horizons) os << ',' << format_double(loss_value(t.at(m, h), family));
            os << '\n';
        }
}

inline nlohmann::json to_json(const LossTable& t) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : t.cells) {
        nlohmann::json j{{"model", c.model},
                         {"horizon", c.horizon},
                         {"records", c.records},
                         {"refit_every", c.refit_every},
                         {"fits", c.fits},
                         {"seed", c.seed},
                         {"mape_excluded", c.point.mape_excluded},
                         {"qlike_canonical_excluded", c.qlike_canonical.excluded},
                         {"floored", c.floored}};
        for (auto family : kLossFamilies) j[std::string(family)] = loss_value(c, family);
        cells.push_back(std::move(j));
    }
    return {{"models", t.models}, {"horizons", t.horizons}, {"cells", std::move(cells)}};
}

/// timestamp,predicted,actual,fit_begin,fit_end with the fit window given by
/// its first and last timestamps.
inline void write_forecast_csv(std::ostream& os, const ForecastSet& set, const std::vector<Timestamp>& timestamps) {
    os << "timestamp,predicted,actual,fit_begin,fit_end\n";
    for (const auto& r : set.records)
        os << format_timestamp(r.target) << ',' << format_double(r.predicted) << ',' << format_double(r.actual) << ','
           << format_timestamp(timestamps[r.fit_begin]) << ',' << format_timestamp(timestamps[r.fit_end - 1]) << '\n';
}

} // namespace rvf::backtest
