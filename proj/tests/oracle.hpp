#pragma once

// Brute-force reference computations for the test suites. Deliberately naive
// and independent of the library code paths (no Eigen, no QR).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<long double>>;

/// Gauss-Jordan inverse with partial pivoting in long double.
inline Matrix invert(Matrix a) {
    const std::size_t k = a.size();
    Matrix inv(k, std::vector<long double>(k, 0.0L));
    for (std::size_t i = 0; i < k; ++i) inv[i][i] = 1.0L;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0L) throw std::runtime_error("oracle: singular normal matrix");
        std::swap(a[c], a[piv]);
        std::swap(inv[c], inv[piv]);
        const long double d = a[c][c];
        for (std::size_t j = 0; j < k; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            const long double f = a[r][c];
            if (f == 0.0L) continue;
            for (std::size_t j = 0; j < k; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

struct Regression {
    std::vector<double> beta;
    std::vector<double> se;
    double r_squared = 0.0;
    double sse = 0.0;
};

/// beta = (X'X)^{-1} X'y from explicitly formed normal equations.
inline Regression normal_equations(const std::vector<std::vector<double>>& X, const std::vector<double>& y) {
    const std::size_t n = X.size(), k = X.front().size();
    Matrix xtx(k, std::vector<long double>(k, 0.0L));
    std::vector<long double> xty(k, 0.0L);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < k; ++a) {
            xty[a] += static_cast<long double>(X[i][a]) * y[i];
            for (std::size_t b = 0; b < k; ++b) xtx[a][b] += static_cast<long double>(X[i][a]) * X[i][b];
        }
    const auto inv = invert(xtx);
    Regression out;
    out.beta.assign(k, 0.0);
    std::vector<long double> beta(k, 0.0L);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) beta[a] += inv[a][b] * xty[b];
    long double sse = 0.0L, ybar = 0.0L, sst = 0.0L;
    for (double v : y) ybar += v;
    ybar /= static_cast<long double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        long double fit = 0.0L;
        for (std::size_t a = 0; a < k; ++a) fit += beta[a] * X[i][a];
        sse += (y[i] - fit) * (y[i] - fit);
        sst += (y[i] - ybar) * (y[i] - ybar);
    }
    const long double s2 = sse / static_cast<long double>(n - k);
    out.se.assign(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        out.beta[a] = static_cast<double>(beta[a]);
        out.se[a] = static_cast<double>(std::sqrt(s2 * inv[a][a]));
    }
    out.sse = static_cast<double>(sse);
    out.r_squared = static_cast<double>(1.0L - sse / sst);
    return out;
}

inline double mean(const std::vector<double>& y) {
    long double s = 0.0L;
    for (double v : y) s += v;
    return static_cast<double>(s / static_cast<long double>(y.size()));
}

/// Two-pass (biased) skewness and excess kurtosis.
inline void shape(const std::vector<double>& y, double& skew, double& exkurt) {
    const long double m = mean(y);
    long double m2 = 0, m3 = 0, m4 = 0;
    for (double v : y) {
        const long double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const long double n = static_cast<long double>(y.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    skew = static_cast<double>(m3 / std::pow(m2, 1.5L));
    exkurt = static_cast<double>(m4 / (m2 * m2) - 3.0L);
}

inline double jarque_bera(const std::vector<double>& y) {
    double s = 0, k = 0;
    shape(y, s, k);
    return static_cast<double>(y.size()) / 6.0 * (s * s + k * k / 4.0);
}

inline double autocorrelation(const std::vector<double>& y, std::size_t lag) {
    const long double m = mean(y);
    long double num = 0, den = 0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        den += (y[t] - m) * (y[t] - m);
        if (t >= lag) num += (y[t] - m) * (y[t - lag] - m);
    }
    return static_cast<double>(num / den);
}

inline double ljung_box(const std::vector<double>& y, std::size_t lags) {
    const double n = static_cast<double>(y.size());
    double q = 0.0;
    for (std::size_t k = 1; k <= lags; ++k) {
        const double r = autocorrelation(y, k);
        q += r * r / (n - static_cast<double>(k));
    }
    return n * (n + 2.0) * q;
}

inline double arch_lm(const std::vector<double>& y, std::size_t lags) {
    const double m = mean(y);
    std::vector<double> e2;
    for (double v : y) e2.push_back((v - m) * (v - m));
    std::vector<std::vector<double>> X;
    std::vector<double> target;
    for (std::size_t t = lags; t < y.size(); ++t) {
        std::vector<double> row{1.0};
        for (std::size_t j = 1; j <= lags; ++j) row.push_back(e2[t - j]);
        X.push_back(row);
        target.push_back(e2[t]);
    }
    return static_cast<double>(target.size()) * normal_equations(X, target).r_squared;
}

inline double adf(const std::vector<double>& y, std::size_t p) {
    std::vector<std::vector<double>> X;
    std::vector<double> target;
    for (std::size_t t = p + 1; t < y.size(); ++t) {
        std::vector<double> row{1.0, y[t - 1]};
        for (std::size_t j = 1; j <= p; ++j) row.push_back(y[t - j] - y[t - j - 1]);
        X.push_back(row);
        target.push_back(y[t] - y[t - 1]);
    }
    const auto reg = normal_equations(X, target);
    return reg.beta[1] / reg.se[1];
}

inline double rel_err(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

} // namespace oracle
