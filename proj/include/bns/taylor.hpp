#pragma once

#include "bns/moments.hpp"
#include "bns/params.hpp"

#include <memory>
#include <vector>

namespace bns {

/// One (n,k) layer of the expansion: contribution =
/// (1/n!) C(n,k) S0^{n-k} E[(P-1)^{n-k} (I-EI)^k] d^n BS / dx^{n-k} dy^k.
struct CorrectionTerm {
    int n = 0;
    int k = 0;
    double moment = 0.0;
    double deriv = 0.0;
    double contribution = 0.0;
};

struct PriceResult {
    double value = 0.0;
    int order = 2;
    double base_bs = 0.0; // BS_put(S0, E[I_T])
    std::vector<CorrectionTerm> corrections;
    std::shared_ptr<const MomentTable> moments_used;

    // Sum of the n == layer corrections (the increment from order layer-1).
    double layer_sum(int layer) const;
};

/// Taylor approximation of the put price around (S0, E[I_T]), orders n = 2..N.
/// Deterministic; no quadrature, no randomness. Throws when a required
/// moment power exceeds the admissible range (rho > 0 only).
PriceResult taylor_price(const ModelParams& p, const OptionSpec& opt, int order);

// Explicit four-term second-order formula on an independent code path
// (closed-form moments, direct second derivatives). Agrees with
// taylor_price(..., 2) to roundoff.
PriceResult second_order_price(const ModelParams& p, const OptionSpec& opt);

// Price via the strike-homogeneity identity Pi(S0,K,T) = K Pi(S0/K,1,T).
PriceResult price_by_homogeneity(const ModelParams& p, const OptionSpec& opt, int order);

} // namespace bns
