#pragma once

#include <utility>

namespace bns {

// d_pm(x, y) = (ln(x/K) + rT +/- y/2) / sqrt(y). y is total variance over
// the option's life, r_t the rate-times-expiry product.
std::pair<double, double> d_pm(double x, double y, double strike, double r_t);

// Black-Scholes put as a function of (x, y): K e^{-rT} Phi(-d-) - x Phi(-d+).
double bs_put(double x, double y, double strike, double r_t);

// Call counterpart, used by the CLI for parity display.
double bs_call(double x, double y, double strike, double r_t);

// Direct second-order partials (independent of the term algebra; they seed
// it and cross-check the explicit second-order pricer).
double bs_d2_dx2(double x, double y, double strike, double r_t);
double bs_d2_dy2(double x, double y, double strike, double r_t);
double bs_d2_dxdy(double x, double y, double strike, double r_t);

} // namespace bns
