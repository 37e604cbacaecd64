#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rvf/econometric/realized_garch.hpp"

using namespace rvf::econometric;
using Catch::Approx;

namespace {

RealizedGarchParams dgp(double alpha, double beta, double gamma) {
    RealizedGarchParams p;
    p.omega = 1e-7;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.xi = 0.0;
    p.phi = 1.0;
    p.sigma_u = 1.0; // placeholder so long_run_variance() is defined
    p.sigma_u = 0.3 * p.long_run_variance();
    return p;
}

} // namespace

TEST_CASE("rgarch_forecast closed forms", "[rgarch]") {
    SECTION("alpha = gamma = 0 reduces to AR(1) in h") {
        RealizedGarchParams p;
        p.omega = 2e-6;
        p.beta = 0.85;
        p.xi = 1e-5;
        p.phi = 0.7;
        p.sigma_u = 1e-5;
        const RealizedGarchState s{9e-4, 3e-4, 5e-4};
        const auto f = rgarch_forecast(p, s, 25);
        for (std::size_t k = 1; k <= 25; ++k) {
            const double bk = std::pow(p.beta, static_cast<double>(k));
            const double expect = p.omega * (1.0 - bk) / (1.0 - p.beta) + bk * s.last_h;
            CHECK(std::abs(f[k - 1] - expect) <= 1e-12 * std::abs(expect));
        }
    }
    SECTION("fixed point") {
        RealizedGarchParams p;
        p.omega = 1e-6;
        p.beta = 0.5;
        p.gamma = 0.3;
        p.xi = 2e-6;
        p.phi = 1.1;
        p.sigma_u = 1e-6;
        const double hstar = (p.omega + p.gamma * p.xi) / (1.0 - p.beta - p.gamma * p.phi);
        const RealizedGarchState s{123.0, p.xi + p.phi * hstar, hstar};
        for (double v : rgarch_forecast(p, s, 20)) CHECK(v == Approx(hstar).epsilon(1e-13));
    }
    SECTION("three steps match a manual unroll") {
        RealizedGarchParams p{3e-7, 0.04, 0.6, 0.3, 1e-6, 0.9, 1e-6};
        const RealizedGarchState s{4e-4, 2e-4, 3e-4};
        const auto f = rgarch_forecast(p, s, 3);
        const double h1 = 3e-7 + 0.04 * 4e-4 + 0.6 * 3e-4 + 0.3 * 2e-4;
        const double h2 = 3e-7 + 0.04 * h1 + 0.6 * h1 + 0.3 * (1e-6 + 0.9 * h1);
        const double h3 = 3e-7 + 0.04 * h2 + 0.6 * h2 + 0.3 * (1e-6 + 0.9 * h2);
        CHECK(f[0] == Approx(h1).epsilon(1e-14));
        CHECK(f[1] == Approx(h2).epsilon(1e-14));
        CHECK(f[2] == Approx(h3).epsilon(1e-14));
    }
}

TEST_CASE("rgarch_fit input validation", "[rgarch]") {
    const std::vector<double> r(300, 0.01), zeros(300, 0.0), shorter(299, 1e-4);
    CHECK_THROWS_AS(rgarch_fit(r, zeros), std::domain_error);
    CHECK_THROWS_AS(rgarch_fit(r, shorter), std::invalid_argument);
}

TEST_CASE("rgarch_fit recovers a simulated model", "[rgarch]") {
    const auto truth = dgp(0.05, 0.50, 0.40);
    const auto sample = rgarch_simulate(truth, 50'000, 4242);
    const auto& r = sample.returns.values;
    const auto fit = rgarch_fit(r, sample.realized);
    INFO("phi " << fit.params.phi << " gamma " << fit.params.gamma << " beta " << fit.params.beta);
    CHECK(fit.diagnostics.log_likelihood >= rgarch_log_likelihood(truth, r, sample.realized));
    CHECK(std::abs(fit.params.phi - truth.phi) < 0.15);
    CHECK(fit.params.persistence() < 1.0);
}

TEST_CASE("rgarch_fit finds no measurement feedback when there is none", "[rgarch]") {
    const auto truth = dgp(0.05, 0.90, 0.0);
    const auto sample = rgarch_simulate(truth, 50'000, 777);
    const auto fit = rgarch_fit(sample.returns.values, sample.realized);
    INFO("gamma " << fit.params.gamma);
    CHECK(std::abs(fit.params.gamma) < 0.05);
    CHECK(fit.diagnostics.log_likelihood >= rgarch_log_likelihood(truth, sample.returns.values, sample.realized));
}
