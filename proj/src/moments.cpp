#include "bns/moments.hpp"

#include "bns/common.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <string>

namespace bns {

double expected_integrated_variance(const ModelParams& p, double expiry) {
    const double kp0 = p.cumulant.kappa_deriv(1, 0.0);
    return alpha(p.lambda, 0.0, expiry) * (p.sigma0_sq - kp0) + kp0 * expiry;
}

namespace {

// Series form of integral_alpha_pow for x = lambda*T below 2, where the
// binomial identity cancels catastrophically. Factor the kernel as
//   alpha_{s,T} = u e^{-lambda u/2} s(lambda u/2),  u = T - s,  s(z) = sinh(z)/z,
// so that every series coefficient is positive and no cancellation occurs:
//   int_0^T alpha^i ds = T^{i+1} e^{-c} sum_k p_k (x/2)^{2k} S_{i+2k}(c)
// with c = i x/2, p_k the coefficients of s(z)^i, and
// S_n(c) = sum_j c^j n!/(n+1+j)! (the lower incomplete gamma series).
double integral_alpha_pow_series(int i, double x, double expiry) {
    constexpr int max_k = 48;
    std::vector<double> base(max_k), p(max_k, 0.0);
    double fact = 1.0; // (2k+1)!
    for (int k = 0; k < max_k; ++k) {
        if (k > 0) fact *= (2.0 * k) * (2.0 * k + 1.0);
        base[k] = 1.0 / fact;
    }
    p[0] = 1.0;
    for (int rep = 0; rep < i; ++rep) {
        std::vector<double> next(max_k, 0.0);
        for (int a = 0; a < max_k; ++a) {
            if (p[a] == 0.0) continue;
            for (int b2 = 0; a + b2 < max_k; ++b2) next[a + b2] += p[a] * base[b2];
        }
        p.swap(next);
    }
    const double c = 0.5 * i * x;
    const double x2_sq = 0.25 * x * x;
    double sum = 0.0, xpow = 1.0;
    for (int k = 0; k < max_k; ++k) {
        const int n = i + 2 * k;
        double term = 1.0 / (n + 1.0), s_n = term;
        for (int j = 1; j < 4000 && term > 1e-18 * s_n; ++j) {
            term *= c / (n + 1.0 + j);
            s_n += term;
        }
        const double contrib = p[k] * xpow * s_n;
        sum += contrib;
        if (k > i && contrib < 1e-18 * sum) break;
        xpow *= x2_sq;
    }
    return std::pow(expiry, i + 1) * std::exp(-c) * sum;
}

} // namespace

double integral_alpha_pow(int i, double lambda, double expiry) {
    if (i < 0) throw std::invalid_argument("integral_alpha_pow: negative power");
    if (i == 0) return expiry;
    const double x = lambda * expiry;
    if (x < 2.0) return integral_alpha_pow_series(i, x, expiry);
    // For x >= 2 the alternating terms of the closed form decay and the
    // identity is well conditioned.
    KahanSum<double> bracket;
    bracket.add(expiry);
    for (int j = 1; j <= i; ++j) {
        const double sign = (j % 2) ? -1.0 : 1.0;
        bracket.add(sign * binom(i, j) * alpha(lambda, 0.0, j * expiry) / j);
    }
    return bracket.value() / std::pow(lambda, i);
}

std::vector<double> h_sequence(long ell, int k, double f_at_expiry, double c, double d,
                               const ModelParams& p, double expiry) {
    if (c < 0.0 || d < 0.0 || (c == 0.0 && d == 0.0))
        throw std::invalid_argument("h_sequence: need c,d >= 0 with max(c,d) > 0");
    const double khat = p.cumulant.kappa_hat();
    if (!(ell * p.rho < khat))
        throw std::domain_error("h_sequence: ell*rho >= kappa_hat, moment does not exist");

    // int_0^T (c alpha + d)^i ds by binomial expansion; all terms nonnegative.
    std::vector<double> kernel_int(k + 1, 0.0);
    for (int i = 1; i <= k; ++i) {
        KahanSum<double> s;
        for (int q = 0; q <= i; ++q)
            s.add(binom(i, q) * std::pow(c, q) * std::pow(d, i - q)
                  * integral_alpha_pow(q, p.lambda, expiry));
        kernel_int[i] = s.value();
    }

    std::vector<double> h(k + 1);
    h[0] = 1.0;
    const double theta = ell * p.rho;
    for (int step = 1; step <= k; ++step) {
        KahanSum<double> acc;
        acc.add(f_at_expiry * h[step - 1]);
        for (int i = 1; i <= step; ++i)
            acc.add(p.lambda * binom(step - 1, i - 1) * h[step - i]
                    * p.cumulant.kappa_deriv(i, theta) * kernel_int[i]);
        h[step] = acc.value();
    }
    return h;
}

MomentTable::MomentTable(ModelParams p, double expiry) : params_(std::move(p)), expiry_(expiry) {
    require_valid(params_);
    if (!(expiry > 0.0)) throw std::invalid_argument("MomentTable: expiry must be positive");
    e_it_ = expected_integrated_variance(params_, expiry_);
    f_at_expiry_ =
        params_.cumulant.kappa_deriv(1, 0.0) * (alpha(params_.lambda, 0.0, expiry_) - expiry_);
}

double MomentTable::h_value(long ell, int k) const {
    {
        std::shared_lock lock(mutex_);
        auto it = h_rows_.find(ell);
        if (it != h_rows_.end() && k < static_cast<int>(it->second.size())) return it->second[k];
    }
    std::unique_lock lock(mutex_);
    auto& row = h_rows_[ell];
    if (k >= static_cast<int>(row.size()))
        row = h_sequence(ell, k, f_at_expiry_, 1.0, 0.0, params_, expiry_);
    return row[k];
}

double MomentTable::mixed_power_moment(long ell, int k) const {
    const double khat = params_.cumulant.kappa_hat();
    if (!(ell * params_.rho < khat))
        throw std::domain_error("mixed_power_moment: ell*rho >= kappa_hat");
    const double h = h_value(ell, k);
    const double expo = params_.lambda * expiry_
                        * (params_.cumulant.kappa(ell * params_.rho)
                           - ell * params_.cumulant.kappa(params_.rho));
    return std::exp(expo) * h;
}

double MomentTable::central_mixed_moment(int n, int k) const {
    if (k > n || k < 0) throw std::invalid_argument("central_mixed_moment: need 0 <= k <= n");
    const int m = n - k;
    KahanSum<long double> acc;
    for (int ell = 0; ell <= m; ++ell) {
        const long double sign = ((m - ell) % 2) ? -1.0L : 1.0L;
        acc.add(sign * static_cast<long double>(binom(m, ell))
                * static_cast<long double>(mixed_power_moment(ell, k)));
    }
    return static_cast<double>(acc.value());
}

MomentTable::SecondOrder MomentTable::second_order_moments() const {
    const auto& c = params_.cumulant;
    const double lam = params_.lambda, t = expiry_, rho = params_.rho;
    const double lt = lam * t;
    SecondOrder out;
    out.var_i = c.kappa_deriv(2, 0.0) / (lam * lam)
                * (lt - 1.5 + 2.0 * std::exp(-lt) - 0.5 * std::exp(-2.0 * lt));
    out.m2_p = std::expm1(lt * (c.kappa(2.0 * rho) - 2.0 * c.kappa(rho)));
    out.cov_pi = (c.kappa_deriv(1, rho) - c.kappa_deriv(1, 0.0)) * (t - alpha(lam, 0.0, t));
    return out;
}

std::shared_ptr<const MomentTable> shared_moment_table(const ModelParams& p, double expiry) {
    static std::map<std::string, std::shared_ptr<const MomentTable>> registry;
    static std::shared_mutex mtx;
    char tkey[40];
    std::snprintf(tkey, sizeof tkey, "|T=%.17g", expiry);
    const std::string key = p.cache_key() + tkey;
    {
        std::shared_lock lock(mtx);
        auto it = registry.find(key);
        if (it != registry.end()) return it->second;
    }
    auto table = std::make_shared<const MomentTable>(p, expiry);
    std::unique_lock lock(mtx);
    return registry.emplace(key, std::move(table)).first->second;
}

} // namespace bns
