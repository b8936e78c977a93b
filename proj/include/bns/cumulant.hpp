#pragma once

#include <string>

namespace bns {

enum class OuKind { inverse_gaussian, gamma };

/// Cumulant generating function of the BDLP at unit time, kappa(theta) =
/// ln E[exp(theta Z_1)], for the two stationary laws supported here:
///
///   inverse Gaussian:  kappa(theta) = a*theta / sqrt(b^2 - 2*theta),  kappa_hat = b^2/2
///   gamma:             kappa(theta) = a*theta / (b - theta),          kappa_hat = b
///
/// kappa_hat is the right abscissa of finiteness; every evaluation requires
/// theta < kappa_hat.
struct CumulantModel {
    OuKind kind = OuKind::inverse_gaussian;
    double a = 1.0;
    double b = 1.0;

    double kappa_hat() const;
    double kappa(double theta) const;

    // n-th derivative of kappa at theta, n >= 1. Closed forms:
    //   IG:    phi_n a (b^2-2t)^{-(2n-1)/2} + (2n-1)!! a t (b^2-2t)^{-(2n+1)/2}
    //   gamma: n! a (b-t)^{-n} + n! a t (b-t)^{-n-1}
    // Large powers are evaluated in log space to dodge premature underflow.
    double kappa_deriv(int n, double theta) const;

    std::string describe() const;
};

// phi_n sequence of the IG derivative formula: phi_1 = 1,
// phi_n = phi_{n-1}(2n-3) + (2n-3)!!. Memoized to n = 32.
double ig_phi(int n);

} // namespace bns
