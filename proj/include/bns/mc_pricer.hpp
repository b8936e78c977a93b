#pragma once

#include "bns/params.hpp"

#include <cstdint>
#include <vector>

namespace bns {

struct McSettings {
    long paths = 1000000;
    int grid_steps_per_year = 250; // IG-increment resolution
    std::uint64_t seed = 20240807ULL;
    bool antithetic = false;
    int threads = 0; // 0 = OpenMP default; 1 = serial reference loop
};

/// Terminal state per path. The jump component is simulated at exact jump
/// times (gamma BDLP: compound Poisson with exponential sizes; IG BDLP:
/// per-interval IG increments plus a compound Poisson of squared normals),
/// integrated variance accumulates each contribution through the exact
/// alpha kernel, and the Brownian integral enters through its conditional
/// normal law. Every path satisfies I_T >= sigma0^2 alpha_{0,T}.
struct PathBundle {
    std::vector<double> log_price;        // X_T
    std::vector<double> integrated_var;   // I_T
    std::vector<double> martingale_factor; // P_T
};

PathBundle simulate_paths(const ModelParams& p, double expiry, const McSettings& s);

struct McPrice {
    double price = 0.0;      // conditional estimator: mean BS_put(S0 P_T, I_T)
    double std_error = 0.0;
    double plain_price = 0.0; // discounted payoff estimator
    double plain_std_error = 0.0;
};

// Conditional (mixing-formula) Monte Carlo is the headline estimator; the
// plain payoff average is reported alongside as a consistency check.
McPrice mc_put_price(const ModelParams& p, const OptionSpec& opt, const McSettings& s);
McPrice mc_put_price(const ModelParams& p, const OptionSpec& opt, const PathBundle& bundle);

struct McMoment {
    double value = 0.0;
    double std_error = 0.0;
};

// Sample estimate of E[(P_T - 1)^{n-k} (I_T - EI)^k] with EI taken from
// the model, not the sample.
McMoment mc_central_mixed_moment(const PathBundle& bundle, int n, int k, double mean_i);

} // namespace bns
