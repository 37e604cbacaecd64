#pragma once

// Descriptive statistics and the residual-diagnostic test battery
// (Jarque-Bera, Ljung-Box, ARCH-LM, augmented Dickey-Fuller).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "rvf/ols.hpp"
#include "rvf/series.hpp"

namespace rvf::stats {

/// Kurtosis is excess kurtosis (normal = 0).
struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;
};

struct TestResult {
    double statistic = 0.0;
    std::optional<double> p_value;
    std::string decision_note;
};

/// Upper tail of chi-square(dof).
inline double chi_square_sf(double x, double dof) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

namespace detail {

struct Moments {
    double mean, m2, m3, m4; // central moments with 1/n
};

inline Moments central_moments(std::span<const double> y) {
    const double n = static_cast<double>(y.size());
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : y) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    return {mean, m2 / n, m3 / n, m4 / n};
}

} // namespace detail

/// Sample moments. sd uses the n-1 denominator; skewness m3/m2^1.5 and excess
/// kurtosis m4/m2^2 - 3 use uncorrected 1/n moments. A constant series reports
/// skewness and kurtosis as 0.
inline SummaryStats summarize(std::span<const double> y) {
    if (y.size() < 4) throw std::invalid_argument("summarize: need at least 4 observations");
    const auto m = detail::central_moments(y);
    SummaryStats s;
    s.n = y.size();
    s.mean = m.mean;
    s.sd = std::sqrt(m.m2 * static_cast<double>(y.size()) / static_cast<double>(y.size() - 1));
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    s.min = *lo;
    s.max = *hi;
    if (m.m2 > 0.0) {
        s.skewness = m.m3 / std::pow(m.m2, 1.5);
        s.kurtosis = m.m4 / (m.m2 * m.m2) - 3.0;
    }
    return s;
}

inline TestResult jarque_bera(std::span<const double> y) {
    if (y.size() < 8) throw std::invalid_argument("jarque_bera: need at least 8 observations");
    const auto m = detail::central_moments(y);
    if (!(m.m2 > 0.0)) throw std::domain_error("jarque_bera: zero variance");
    const double skew = m.m3 / std::pow(m.m2, 1.5);
    const double exkurt = m.m4 / (m.m2 * m.m2) - 3.0;
    const double n = static_cast<double>(y.size());
    TestResult r;
    r.statistic = n / 6.0 * (skew * skew + exkurt * exkurt / 4.0);
    r.p_value = chi_square_sf(r.statistic, 2.0);
    r.decision_note = *r.p_value < 0.05 ? "reject normality at 5%" : "normality not rejected at 5%";
    return r;
}

/// Sample autocorrelations at lags 1..max_lag with the biased 1/n estimator.
inline std::vector<double> autocorrelations(std::span<const double> y, std::size_t max_lag) {
    const std::size_t n = y.size();
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double c0 = 0.0;
    for (double v : y) c0 += (v - mean) * (v - mean);
    if (!(c0 > 0.0)) throw std::domain_error("autocorrelations: zero variance");
    std::vector<double> rho(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t t = k; t < n; ++t) ck += (y[t] - mean) * (y[t - k] - mean);
        rho[k - 1] = ck / c0;
    }
    return rho;
}

inline TestResult ljung_box(std::span<const double> y, std::size_t lags = 20) {
    const std::size_t n = y.size();
    if (lags == 0) throw std::invalid_argument("ljung_box: lags must be positive");
    if (n <= lags + 1) throw std::invalid_argument("ljung_box: need more than lags + 1 observations");
    const auto rho = autocorrelations(y, lags);
    const double nd = static_cast<double>(n);
    double q = 0.0;
    for (std::size_t k = 1; k <= lags; ++k) q += rho[k - 1] * rho[k - 1] / (nd - static_cast<double>(k));
    TestResult r;
    r.statistic = nd * (nd + 2.0) * q;
    r.p_value = chi_square_sf(r.statistic, static_cast<double>(lags));
    r.decision_note = *r.p_value < 0.05 ? "autocorrelated (not white noise) at 5%" : "white noise not rejected at 5%";
    return r;
}

/// Engle's LM test: regress squared demeaned series on `lags` of itself.
inline TestResult arch_lm(std::span<const double> y, std::size_t lags) {
    const std::size_t n = y.size();
    if (lags == 0) throw std::invalid_argument("arch_lm: lags must be positive");
    if (n <= 2 * lags + 1) throw std::invalid_argument("arch_lm: need more than 2*lags + 1 observations");
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    std::vector<double> e2(n);
    for (std::size_t t = 0; t < n; ++t) e2[t] = (y[t] - mean) * (y[t] - mean);
    const auto rows = static_cast<Eigen::Index>(n - lags);
    Eigen::MatrixXd X(rows, static_cast<Eigen::Index>(lags + 1));
    Eigen::VectorXd target(rows);
    for (std::size_t t = lags; t < n; ++t) {
        const auto i = static_cast<Eigen::Index>(t - lags);
        target(i) = e2[t];
        X(i, 0) = 1.0;
        for (std::size_t j = 1; j <= lags; ++j) X(i, static_cast<Eigen::Index>(j)) = e2[t - j];
    }
    const auto fit = ols(X, target);
    TestResult r;
    r.statistic = static_cast<double>(rows) * fit.r_squared;
    r.p_value = chi_square_sf(r.statistic, static_cast<double>(lags));
    r.decision_note = *r.p_value < 0.05 ? "ARCH effect present at 5%" : "no ARCH effect at 5%";
    return r;
}

/// Constant-only ADF critical values (asymptotic).
struct AdfCriticalValues {
    static constexpr double one_percent = -3.43;
    static constexpr double five_percent = -2.86;
    static constexpr double ten_percent = -2.57;
};

/// ADF regression of dy_t on (1, y_{t-1}, dy_{t-1..t-max_lag}); the statistic
/// is the t-ratio on y_{t-1}. No p-value is produced.
inline TestResult adf(std::span<const double> y, std::size_t max_lag) {
    const std::size_t n = y.size();
    if (n <= max_lag + 10) throw std::invalid_argument("adf: need more than max_lag + 10 observations");
    std::vector<double> dy(n, 0.0);
    for (std::size_t t = 1; t < n; ++t) dy[t] = y[t] - y[t - 1];
    const std::size_t first = max_lag + 1;
    const auto rows = static_cast<Eigen::Index>(n - first);
    const auto cols = static_cast<Eigen::Index>(2 + max_lag);
    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd target(rows);
    for (std::size_t t = first; t < n; ++t) {
        const auto i = static_cast<Eigen::Index>(t - first);
        target(i) = dy[t];
        X(i, 0) = 1.0;
        X(i, 1) = y[t - 1];
        for (std::size_t j = 1; j <= max_lag; ++j) X(i, static_cast<Eigen::Index>(1 + j)) = dy[t - j];
    }
    const auto fit = ols(X, target);
    TestResult r;
    r.statistic = fit.coefficients(1) / fit.standard_errors(1);
    if (r.statistic < AdfCriticalValues::one_percent)
        r.decision_note = "unit root rejected at 1%";
    else if (r.statistic < AdfCriticalValues::five_percent)
        r.decision_note = "unit root rejected at 5%";
    else if (r.statistic < AdfCriticalValues::ten_percent)
        r.decision_note = "unit root rejected at 10%";
    else
        r.decision_note = "unit root not rejected";
    return r;
}

/// Schwert's rule of thumb, floor(12 (n/100)^{1/4}).
inline std::size_t schwert_lag(std::size_t n) {
    return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

struct DiagnosticRow {
    std::string series;
    SummaryStats summary;
    TestResult jarque_bera;
    TestResult ljung_box;
    TestResult adf;
    TestResult arch_lm;
};

struct DiagnosticOptions {
    std::size_t ljung_box_lags = 20;
    std::size_t arch_lags = 5;
    std::optional<std::size_t> adf_max_lag; ///< Schwert's rule when absent
};

inline DiagnosticRow diagnose(std::string name, std::span<const double> y, const DiagnosticOptions& opts = {}) {
    DiagnosticRow row;
    row.series = std::move(name);
    row.summary = summarize(y);
    row.jarque_bera = jarque_bera(y);
    row.ljung_box = ljung_box(y, opts.ljung_box_lags);
    std::size_t adf_lag = opts.adf_max_lag.value_or(schwert_lag(y.size()));
    adf_lag = std::min(adf_lag, y.size() > 11 ? y.size() - 11 : std::size_t{0});
    row.adf = adf(y, adf_lag);
    row.arch_lm = arch_lm(y, opts.arch_lags);
    return row;
}

/// Column order follows the descriptive table: Obs, Mean, SD, Min, Max, Skew,
/// Kurt, J-B p, L-B p, ADF; ARCH-LM p and the ADF decision trail.
inline std::string diagnostics_csv_header() {
    return "series,obs,mean,sd,min,max,skew,kurt,jb_pvalue,lb_pvalue,adf_stat,arch_lm_pvalue,adf_decision";
}

inline std::string diagnostics_csv_row(const DiagnosticRow& r) {
    const auto& s = r.summary;
    std::string out = r.series;
    out += ',' + std::to_string(s.n);
    for (double v : {s.mean, s.sd, s.min, s.max, s.skewness, s.kurtosis, r.jarque_bera.p_value.value_or(NAN),
                     r.ljung_box.p_value.value_or(NAN), r.adf.statistic, r.arch_lm.p_value.value_or(NAN)})
        out += ',' + format_double(v);
    out += ',' + r.adf.decision_note;
    return out;
}

} // namespace rvf::stats
