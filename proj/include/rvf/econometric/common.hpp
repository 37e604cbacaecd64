#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "rvf/vendor_json.hpp"

namespace rvf::econometric {

struct FitDiagnostics {
    double log_likelihood = 0.0;
    double sse = 0.0; ///< regression fits only
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Floor on conditional variances inside likelihood evaluation and filtering.
inline constexpr double kVarianceFloor = 1e-12;

/// `{"model", "params", "loglik", "converged"}` document for a fitted model.
inline nlohmann::json fit_to_json(const std::string& model, const std::map<std::string, double>& params,
                                  const FitDiagnostics& diag) {
    nlohmann::json j;
    j["model"] = model;
    j["params"] = params;
    j["loglik"] = diag.log_likelihood;
    j["converged"] = diag.converged;
    return j;
}

} // namespace rvf::econometric
