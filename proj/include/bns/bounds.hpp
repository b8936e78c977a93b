#pragma once

#include "bns/deriv_terms.hpp"
#include "bns/params.hpp"

#include <string>
#include <vector>

namespace bns {

/// Numeric upper estimate of sup |d^xi BS_put| over x in (0, inf),
/// y in [beta(T), inf) with beta(T) = sigma0^2 alpha_{0,T}, the floor the
/// subordinator guarantees for the integrated variance. The search scans a
/// log grid in x around K e^{-rT} (factor e^{+-20}) and in y up to
/// beta + 40 E[I_T] (extended until the top edge is immaterial), refines
/// locally, and pads the result by 5%.
double sup_derivative_bound(const DerivKey& key, const ModelParams& p, const OptionSpec& opt,
                            int threads = 0);

// G recursion bounding |E[(P_T - 1)^n]| for rho <= 0.
double gn_bound(int n, const ModelParams& p, double expiry);

enum class BoundMethod { raw_theorem, cauchy_schwarz, rho_zero };

const char* bound_method_name(BoundMethod m);

struct BoundTerm {
    DerivKey key;
    double sup_bound = 0.0;     // M value
    double moment_factor = 0.0; // method-dependent moment piece
    double contribution = 0.0;  // full term including binomial and S0 power
};

struct BoundReport {
    int order = 2;
    BoundMethod method = BoundMethod::cauchy_schwarz;
    std::vector<BoundTerm> terms;
    double total = 0.0;
    // Exponent p of the O(b^-p) error scaling for the model at hand
    // (rho <= 0); zero when not applicable.
    int asymptotic_order_b = 0;
    // The sup bounds blow up as T -> 0; short expiries are flagged.
    bool t_unreliable = false;

    // One CSV row per term: key, M value, moment factor, contribution,
    // total (17 significant digits).
    std::vector<std::string> csv_rows() const;
    std::string to_json() const;
};

/// Assembled bound on |R_N|:
///   raw_theorem:    signed moments against the sup bounds (diagnostic
///                   only; the moments are not absolute moments)
///   cauchy_schwarz: even-moment split, P-side bounded by the G recursion
///                   (requires rho <= 0); the default
///   rho_zero:       single surviving term when rho = 0
BoundReport remainder_bound(int order, const ModelParams& p, const OptionSpec& opt,
                            BoundMethod method, int threads = 0);

struct AsymptoticCoefficients {
    double f_n = 0.0;
    double g_n = 0.0;
    int order_rho0 = 0;    // error exponent in b when rho = 0
    int order_general = 0; // error exponent in b when rho < 0
};

// Proof-level polynomial recursions behind the b-asymptotics of the error:
// f_n bounds the centered I moments, g_n the P-side G values.
AsymptoticCoefficients asymptotic_coefficients(OuKind kind, int n, const ModelParams& p,
                                               double expiry);

} // namespace bns
