#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

namespace rvf {

class RankDeficientError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OlsResult {
    Eigen::VectorXd coefficients;
    Eigen::VectorXd standard_errors; ///< classical (homoskedastic) standard errors
    Eigen::VectorXd residuals;
    double sse = 0.0;
    double r_squared = 0.0;          ///< centered R^2
};

/// Least squares via column-pivoted QR on a column-equilibrated design.
/// Rank is judged on unit-norm columns so badly scaled but independent
/// regressors are not mistaken for collinear ones.
inline OlsResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double rank_tol = 1e-10) {
    const auto n = X.rows();
    const auto k = X.cols();
    if (y.size() != n) throw std::invalid_argument("ols: X and y row counts differ");
    if (n <= k) throw RankDeficientError("ols: fewer observations than regressors");

    Eigen::VectorXd norms = X.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < k; ++j)
        if (!(norms(j) > 0.0) || !std::isfinite(norms(j)))
            throw RankDeficientError("ols: regressor column " + std::to_string(j) + " is zero or non-finite");
    const Eigen::MatrixXd Xs = X * norms.cwiseInverse().asDiagonal();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Xs);
    qr.setThreshold(rank_tol);
    if (qr.rank() < k) throw RankDeficientError("ols: design matrix is rank deficient");

    OlsResult out;
    const Eigen::VectorXd beta_s = qr.solve(y);
    out.coefficients = beta_s.cwiseQuotient(norms);
    out.residuals = y - X * out.coefficients;
    out.sse = out.residuals.squaredNorm();
    const double ybar = y.mean();
    const double sst = (y.array() - ybar).square().sum();
    out.r_squared = sst > 0.0 ? 1.0 - out.sse / sst : 0.0;

    // (Xs'Xs)^{-1} = P R^{-1} R^{-T} P'
    const Eigen::MatrixXd R = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd Rinv =
        R.template triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const Eigen::MatrixXd inv_p = Rinv * Rinv.transpose();
    const auto& perm = qr.colsPermutation();
    const Eigen::MatrixXd inv_s = perm * inv_p * perm.transpose();
    const double s2 = out.sse / static_cast<double>(n - k);
    out.standard_errors.resize(k);
    for (Eigen::Index j = 0; j < k; ++j)
        out.standard_errors(j) = std::sqrt(s2 * inv_s(j, j)) / norms(j);
    return out;
}

} // namespace rvf
