#pragma once

#include "bns/cumulant.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace bns {

/// Full parameter set of the model under the pricing measure.
/// lambda: mean reversion rate, rho: leverage (jump loading in the log
/// price), r: interest rate, sigma0_sq: initial squared volatility,
/// s0: spot. The admissibility condition is rho < kappa_hat.
struct ModelParams {
    double lambda = 1.0;
    double rho = 0.0;
    double r = 0.0;
    double sigma0_sq = 0.04;
    double s0 = 1.0;
    CumulantModel cumulant;

    // Stable key for moment-table caching.
    std::string cache_key() const;
};

struct OptionSpec {
    double strike = 1.0;
    double expiry = 1.0;
};

// alpha_{s,t} = (1 - exp(-lambda (t-s))) / lambda. Requires 0 <= s <= t.
double alpha(double lambda, double s, double t);

inline constexpr long unlimited_power = std::numeric_limits<long>::max();

struct Validation {
    std::vector<std::string> errors;
    // Largest ell with ell*rho < kappa_hat; unlimited_power when rho <= 0.
    long max_power = unlimited_power;

    bool ok() const { return errors.empty(); }
    std::string message() const;
};

// Checks every admissibility condition and reports all violations at once.
Validation validate(const ModelParams& p);

// Throwing convenience wrapper.
void require_valid(const ModelParams& p);

} // namespace bns
