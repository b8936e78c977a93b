#include "bns/taylor.hpp"

#include "bns/bs_math.hpp"
#include "bns/common.hpp"
#include "bns/deriv_terms.hpp"

#include <cmath>
#include <stdexcept>

namespace bns {

double PriceResult::layer_sum(int layer) const {
    KahanSum<double> s;
    for (const auto& c : corrections)
        if (c.n == layer) s.add(c.contribution);
    return s.value();
}

PriceResult taylor_price(const ModelParams& p, const OptionSpec& opt, int order) {
    require_valid(p);
    if (order < 2) throw std::invalid_argument("taylor_price: order >= 2 required");
    const Validation v = validate(p);
    if (order > v.max_power)
        throw std::domain_error("taylor_price: order exceeds admissible moment power (ell*rho "
                                "< kappa_hat fails); cap the order");

    PriceResult res;
    res.order = order;
    res.moments_used = shared_moment_table(p, opt.expiry);
    const MomentTable& table = *res.moments_used;
    const double e_it = table.mean_integrated_variance();
    const double r_t = p.r * opt.expiry;
    res.base_bs = bs_put(p.s0, e_it, opt.strike, r_t);

    // The n = 1 layer vanishes because both factors are centered; checked
    // rather than assumed.
    if (std::abs(table.central_mixed_moment(1, 0)) > 1e-14
        || std::abs(table.central_mixed_moment(1, 1)) > 1e-14)
        throw std::logic_error("taylor_price: first-order moments not centered");

    KahanSum<double> total;
    total.add(res.base_bs);
    double inv_fact = 1.0;
    for (int n = 2; n <= order; ++n) {
        inv_fact /= n;
        for (int k = 0; k <= n; ++k) {
            CorrectionTerm c;
            c.n = n;
            c.k = k;
            c.moment = table.central_mixed_moment(n, k);
            c.deriv = eval_partial({n - k, k}, p.s0, e_it, opt.strike, r_t);
            c.contribution =
                inv_fact * binom(n, k) * std::pow(p.s0, n - k) * c.moment * c.deriv;
            total.add(c.contribution);
            res.corrections.push_back(c);
        }
    }
    res.value = total.value();
    return res;
}

PriceResult second_order_price(const ModelParams& p, const OptionSpec& opt) {
    require_valid(p);
    PriceResult res;
    res.order = 2;
    res.moments_used = shared_moment_table(p, opt.expiry);
    const auto m = res.moments_used->second_order_moments();
    const double e_it = res.moments_used->mean_integrated_variance();
    const double r_t = p.r * opt.expiry;
    res.base_bs = bs_put(p.s0, e_it, opt.strike, r_t);

    const double cxx = 0.5 * bs_d2_dx2(p.s0, e_it, opt.strike, r_t) * p.s0 * p.s0 * m.m2_p;
    const double cyy = 0.5 * bs_d2_dy2(p.s0, e_it, opt.strike, r_t) * m.var_i;
    const double cxy = bs_d2_dxdy(p.s0, e_it, opt.strike, r_t) * p.s0 * m.cov_pi;
    res.corrections = {{2, 0, m.m2_p, 0.0, cxx}, {2, 1, m.cov_pi, 0.0, cxy},
                       {2, 2, m.var_i, 0.0, cyy}};
    res.value = res.base_bs + cxx + cyy + cxy;
    return res;
}

PriceResult price_by_homogeneity(const ModelParams& p, const OptionSpec& opt, int order) {
    ModelParams scaled = p;
    scaled.s0 = p.s0 / opt.strike;
    PriceResult unit = taylor_price(scaled, {1.0, opt.expiry}, order);
    unit.value *= opt.strike;
    unit.base_bs *= opt.strike;
    for (auto& c : unit.corrections) c.contribution *= opt.strike;
    return unit;
}

} // namespace bns
