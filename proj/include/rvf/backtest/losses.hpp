#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace rvf::backtest {

struct PointLosses {
    double mse = 0.0;
    double rmse = 0.0;
    double mape = 0.0; ///< ratio, not percent
    double mae = 0.0;
    std::size_t mape_excluded = 0; ///< records with a zero actual
};

enum class QlikeForm { paper, canonical };

struct QlikeResult {
    double value = 0.0;
    std::size_t excluded = 0; ///< zero actuals, canonical form only
};

namespace detail {
inline void check_pair(std::span<const double> pred, std::span<const double> actual, const char* who) {
    if (pred.size() != actual.size()) throw std::invalid_argument(std::string(who) + ": length mismatch");
    if (pred.empty()) throw std::invalid_argument(std::string(who) + ": empty forecast set");
}
} // namespace detail

inline PointLosses point_losses(std::span<const double> pred, std::span<const double> actual) {
    detail::check_pair(pred, actual, "point_losses");
    PointLosses out;
    double se = 0.0, ae = 0.0, ape = 0.0;
    std::size_t n_ape = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - actual[i];
        se += e * e;
        ae += std::abs(e);
        if (actual[i] == 0.0) {
            ++out.mape_excluded;
        } else {
            ape += std::abs(e) / std::abs(actual[i]);
            ++n_ape;
        }
    }
    if (n_ape == 0) throw std::domain_error("point_losses: mape undefined, every actual is zero");
    const auto n = static_cast<double>(pred.size());
    out.mse = se / n;
    out.rmse = std::sqrt(out.mse);
    out.mae = ae / n;
    out.mape = ape / static_cast<double>(n_ape);
    return out;
}

/// paper:     mean(ln h + s2/h - 1)
/// canonical: mean(s2/h - ln(s2/h) - 1), >= 0 with equality iff h == s2.
inline QlikeResult qlike(std::span<const double> pred, std::span<const double> actual, QlikeForm form) {
    detail::check_pair(pred, actual, "qlike");
    QlikeResult out;
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double h = pred[i], s2 = actual[i];
        if (!(h > 0.0)) throw std::domain_error("qlike: non-positive prediction at record " + std::to_string(i));
        if (form == QlikeForm::paper) {
            sum += std::log(h) + s2 / h - 1.0;
            ++used;
        } else if (s2 > 0.0) {
            const double ratio = s2 / h;
            sum += ratio - std::log(ratio) - 1.0;
            ++used;
        } else {
            ++out.excluded;
        }
    }
    if (used == 0) throw std::domain_error("qlike: every actual is zero");
    out.value = sum / static_cast<double>(used);
    return out;
}

} // namespace rvf::backtest
