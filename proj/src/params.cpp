#include "bns/params.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bns {

double alpha(double lambda, double s, double t) {
    if (s > t) throw std::invalid_argument("alpha: s > t");
    if (lambda <= 0.0) throw std::invalid_argument("alpha: lambda <= 0");
    // expm1 keeps accuracy for small lambda*(t-s).
    return -std::expm1(-lambda * (t - s)) / lambda;
}

Validation validate(const ModelParams& p) {
    Validation v;
    if (!(p.lambda > 0.0)) v.errors.push_back("lambda must be positive");
    if (!(p.sigma0_sq > 0.0)) v.errors.push_back("sigma0_sq must be positive");
    if (!(p.s0 > 0.0)) v.errors.push_back("s0 must be positive");
    if (!(p.cumulant.a > 0.0)) v.errors.push_back("cumulant parameter a must be positive");
    if (!(p.cumulant.b > 0.0)) v.errors.push_back("cumulant parameter b must be positive");
    if (!std::isfinite(p.rho)) v.errors.push_back("rho must be finite");
    if (!std::isfinite(p.r)) v.errors.push_back("r must be finite");

    if (p.cumulant.a > 0.0 && p.cumulant.b > 0.0) {
        const double khat = p.cumulant.kappa_hat();
        if (!(p.rho < khat)) v.errors.push_back("rho must be below kappa_hat");
        if (p.rho > 0.0) {
            // Largest ell with ell*rho < kappa_hat; moments E[P^ell ...]
            // exist only up to this power.
            v.max_power = static_cast<long>(std::ceil(khat / p.rho)) - 1;
            while ((v.max_power + 1) * p.rho < khat) ++v.max_power;
            while (v.max_power > 0 && !(v.max_power * p.rho < khat)) --v.max_power;
        }
    }
    return v;
}

std::string Validation::message() const {
    std::string m;
    for (const auto& e : errors) {
        if (!m.empty()) m += "; ";
        m += e;
    }
    return m;
}

void require_valid(const ModelParams& p) {
    const Validation v = validate(p);
    if (!v.ok()) throw std::invalid_argument("invalid model parameters: " + v.message());
}

std::string ModelParams::cache_key() const {
    char buf[192];
    std::snprintf(buf, sizeof buf, "%s|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g|%.17g",
                  cumulant.kind == OuKind::inverse_gaussian ? "ig" : "gamma", cumulant.a,
                  cumulant.b, lambda, rho, r, sigma0_sq, s0);
    return buf;
}

} // namespace bns
