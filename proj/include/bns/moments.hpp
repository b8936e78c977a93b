#pragma once

#include "bns/params.hpp"

#include <map>
#include <memory>
#include <shared_mutex>
#include <utility>
#include <vector>

namespace bns {

// E[I_T] = alpha_{0,T} (sigma0^2 - kappa'(0)) + kappa'(0) T.
double expected_integrated_variance(const ModelParams& p, double expiry);

// Closed-form integral of alpha_{s,T}^i over s in [0,T]. Uses the binomial
// identity (1/lambda^i)[T + sum_j (1/j) C(i,j) (-1)^j alpha_{0,jT}]; for
// small lambda*T the identity cancels catastrophically, so a power series
// in lambda*T takes over below x = 1e-2.
double integral_alpha_pow(int i, double lambda, double expiry);

/// General moment recursion for F_T = f(T) + int_0^T (c alpha_{s,T} + d) dZ,
/// with c,d >= 0 and max(c,d) > 0:
///
///   E[P_T^ell F_T^k] = exp(lambda T (kappa(ell rho) - ell kappa(rho))) H_{ell,k}
///
/// Returns H_{ell,0..k}. Throws std::domain_error when ell*rho >= kappa_hat.
std::vector<double> h_sequence(long ell, int k, double f_at_expiry, double c, double d,
                               const ModelParams& p, double expiry);

/// Cached mixed moments of (P_T, I_T - E[I_T]) for one (params, expiry) pair.
/// Rows are built lazily; reads are shared, writes exclusive.
class MomentTable {
public:
    MomentTable(ModelParams p, double expiry);

    const ModelParams& params() const { return params_; }
    double expiry() const { return expiry_; }
    double mean_integrated_variance() const { return e_it_; }

    // E[P_T^ell (I_T - E I_T)^k]; requires ell*rho < kappa_hat.
    double mixed_power_moment(long ell, int k) const;

    // E[(P_T - 1)^{n-k} (I_T - E I_T)^k] via the binomial expansion,
    // compensated and accumulated in extended precision.
    double central_mixed_moment(int n, int k) const;

    struct SecondOrder {
        double var_i;  // E[(I - EI)^2]
        double m2_p;   // E[(P - 1)^2]
        double cov_pi; // E[(P - 1)(I - EI)]
    };
    // Closed forms of the second-order moments; independent of the
    // recursion path and used to cross-check it.
    SecondOrder second_order_moments() const;

private:
    double h_value(long ell, int k) const;

    ModelParams params_;
    double expiry_;
    double e_it_;
    double f_at_expiry_; // kappa'(0) (alpha_{0,T} - T)
    mutable std::map<long, std::vector<double>> h_rows_;
    mutable std::shared_mutex mutex_;
};

// Process-wide registry so parameter sweeps reuse tables. Key is the
// content of (params, expiry); strike plays no role in the moments.
std::shared_ptr<const MomentTable> shared_moment_table(const ModelParams& p, double expiry);

} // namespace bns
