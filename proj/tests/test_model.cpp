#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bns/params.hpp"

#include <random>

using namespace bns;

TEST_CASE("alpha kernel values") {
    CHECK(alpha(0.7, 1.0, 1.0) == 0.0);
    CHECK(alpha(0.5, 0.0, 1.0) == doctest::Approx(0.78693868).epsilon(1e-8));
    CHECK(alpha(0.5, 0.0, 40.0) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK_THROWS_AS(alpha(0.5, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("alpha bounds and monotonicity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double lam = 1e-3 + 10.0 * u(rng);
        const double t = 10.0 * u(rng);
        const double s = t * u(rng);
        const double a = alpha(lam, s, t);
        CHECK(a >= 0.0);
        CHECK(a <= std::min(t - s, 1.0 / lam) * (1.0 + 1e-12));
        // monotone in the gap
        CHECK(alpha(lam, s * 0.5, t) >= a);
    }
}

TEST_CASE("validate accepts the reference parameter sets") {
    ModelParams p;
    p.cumulant = {OuKind::inverse_gaussian, 20.0, 5.0};
    p.lambda = 0.5;
    p.rho = -0.5;
    p.r = 0.05;
    p.sigma0_sq = 0.5;
    p.s0 = 1.0;
    const auto v = validate(p);
    CHECK(v.ok());
    CHECK(v.max_power == unlimited_power);
}

TEST_CASE("validate rejects rho >= kappa_hat") {
    ModelParams p;
    p.cumulant = {OuKind::inverse_gaussian, 20.0, 5.0};
    p.rho = 13.0;
    const auto v = validate(p);
    CHECK_FALSE(v.ok());
    CHECK(v.message().find("kappa_hat") != std::string::npos);
}

TEST_CASE("validate caps the usable power for positive rho") {
    ModelParams p;
    p.cumulant = {OuKind::gamma, 1.0, 10.0};
    p.rho = 3.0;
    const auto v = validate(p);
    CHECK(v.ok()); // rho < kappa_hat = 10, parameters are admissible
    CHECK(v.max_power == 3); // 3*3 < 10 <= 4*3
}

TEST_CASE("validate reports every violation") {
    ModelParams p;
    p.lambda = -1.0;
    p.sigma0_sq = 0.0;
    p.s0 = -2.0;
    p.cumulant = {OuKind::gamma, -1.0, 0.0};
    const auto v = validate(p);
    CHECK(v.errors.size() >= 5);
}
