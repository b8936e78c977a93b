#include "bns/bounds.hpp"

#include "bns/common.hpp"
#include "bns/moments.hpp"

#include "json.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bns {

namespace {

struct GridMax {
    double value = 0.0;
    double x = 0.0, y = 0.0;
};

GridMax scan_grid(const DerivKey& key, const OptionSpec& opt, double r_t, double x_lo,
                  double x_hi, double y_lo, double y_hi, int nx, int ny, bool log_y,
                  int threads) {
    std::vector<double> vals(static_cast<std::size_t>(nx) * ny);
    std::vector<double> xs(nx), ys(ny);
    for (int i = 0; i < nx; ++i)
        xs[i] = nx == 1 ? x_lo : x_lo * std::exp(std::log(x_hi / x_lo) * i / (nx - 1.0));
    for (int j = 0; j < ny; ++j)
        ys[j] = ny == 1 ? y_lo
                : log_y ? y_lo * std::exp(std::log(y_hi / y_lo) * j / (ny - 1.0))
                        : y_lo + (y_hi - y_lo) * j / (ny - 1.0);
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            vals[static_cast<std::size_t>(i) * ny + j] =
                std::abs(eval_partial(key, xs[i], ys[j], opt.strike, r_t));
    // serial argmax keeps the result independent of the thread count
    GridMax best;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const double v = vals[static_cast<std::size_t>(i) * ny + j];
            if (v > best.value) best = {v, xs[i], ys[j]};
        }
    return best;
}

} // namespace

double sup_derivative_bound(const DerivKey& key, const ModelParams& p, const OptionSpec& opt,
                            int threads) {
    if (key.order() < 3)
        throw std::invalid_argument("sup_derivative_bound: |key| >= 3 required");
    require_valid(p);
    const double r_t = p.r * opt.expiry;
    const double beta = p.sigma0_sq * alpha(p.lambda, 0.0, opt.expiry);
    const double e_it = expected_integrated_variance(p, opt.expiry);
    const double anchor = opt.strike * std::exp(-r_t);

    double y_hi = beta + 40.0 * e_it;
    GridMax best;
    for (int attempt = 0;; ++attempt) {
        best = scan_grid(key, opt, r_t, anchor * std::exp(-20.0), anchor * std::exp(20.0), beta,
                         y_hi, 161, 81, true, threads);
        // top-edge mass must be immaterial, otherwise the truncation of the
        // y domain could hide the sup
        GridMax edge = scan_grid(key, opt, r_t, anchor * std::exp(-20.0), anchor * std::exp(20.0),
                                 y_hi, y_hi, 161, 1, false, threads);
        if (edge.value < 0.01 * best.value || best.value == 0.0) break;
        if (attempt >= 6)
            throw std::runtime_error("sup_derivative_bound: y-domain extension did not settle");
        y_hi *= 4.0;
    }

    // local refinement around the best cell
    double wx = std::exp(40.0 / 160.0); // one coarse x step, multiplicative
    double wy = (y_hi - beta) / 80.0;
    double cx = best.x, cy = best.y;
    for (int round = 0; round < 4; ++round) {
        const double x_lo = cx / wx, x_hi = cx * wx;
        const double y_lo = std::max(beta, cy - wy), y_hi2 = cy + wy;
        const GridMax local =
            scan_grid(key, opt, r_t, x_lo, x_hi, y_lo, y_hi2, 17, 17, false, threads);
        if (local.value > best.value) best = local;
        cx = best.x;
        cy = best.y;
        wx = std::pow(wx, 0.2);
        wy *= 0.1;
    }
    return 1.05 * best.value;
}

double gn_bound(int n, const ModelParams& p, double expiry) {
    if (p.rho > 0.0) throw std::domain_error("gn_bound: requires rho <= 0");
    if (n < 0) throw std::invalid_argument("gn_bound: n >= 0");
    if (n == 0) return 1.0;
    if (p.rho == 0.0) return 0.0; // P_T identically 1
    const double lt_kappa = p.lambda * expiry * p.cumulant.kappa(p.rho);
    const double f = -lt_kappa * (0.5 * std::exp(-lt_kappa) + 0.5);
    return h_sequence(0, n, f, 0.0, -p.rho, p, expiry)[n];
}

const char* bound_method_name(BoundMethod m) {
    switch (m) {
    case BoundMethod::raw_theorem: return "raw_theorem";
    case BoundMethod::cauchy_schwarz: return "cauchy_schwarz";
    case BoundMethod::rho_zero: return "rho_zero";
    }
    return "?";
}

BoundReport remainder_bound(int order, const ModelParams& p, const OptionSpec& opt,
                            BoundMethod method, int threads) {
    require_valid(p);
    if (order < 2) throw std::invalid_argument("remainder_bound: order >= 2 required");
    if (method == BoundMethod::rho_zero && p.rho != 0.0)
        throw std::domain_error("remainder_bound: rho_zero method requires rho = 0");
    if (method == BoundMethod::cauchy_schwarz && p.rho > 0.0)
        throw std::domain_error("remainder_bound: cauchy_schwarz method requires rho <= 0");

    const auto table = shared_moment_table(p, opt.expiry);
    BoundReport rep;
    rep.order = order;
    rep.method = method;
    rep.t_unreliable = opt.expiry < 0.05;
    if (p.rho < 0.0)
        rep.asymptotic_order_b = order + 1;
    else if (p.rho == 0.0)
        rep.asymptotic_order_b =
            p.cumulant.kind == OuKind::inverse_gaussian ? order + 2 : order + 1;

    const int top = order + 1;
    double inv_fact = 1.0;
    for (int i = 2; i <= top; ++i) inv_fact /= i;

    KahanSum<double> total;
    for (int n = 0; n <= top; ++n) {
        if (method == BoundMethod::rho_zero && n != top) continue;
        BoundTerm term;
        term.key = {top - n, n};
        term.sup_bound = sup_derivative_bound(term.key, p, opt, threads);
        switch (method) {
        case BoundMethod::raw_theorem:
            // |E[...]| is generally smaller than the absolute moment the
            // rigorous route needs; diagnostic only.
            term.moment_factor = std::abs(table->central_mixed_moment(top, n));
            break;
        case BoundMethod::cauchy_schwarz: {
            const double p_side = gn_bound(2 * top - 2 * n, p, opt.expiry);
            const double i_side = std::max(0.0, table->mixed_power_moment(0, 2 * n));
            term.moment_factor = std::sqrt(p_side) * std::sqrt(i_side);
            break;
        }
        case BoundMethod::rho_zero:
            term.moment_factor = std::abs(table->mixed_power_moment(0, top));
            break;
        }
        term.contribution =
            inv_fact * binom(top, n) * std::pow(p.s0, top - n) * term.moment_factor
            * term.sup_bound;
        total.add(term.contribution);
        rep.terms.push_back(term);
    }
    rep.total = total.value();
    return rep;
}

std::vector<std::string> BoundReport::csv_rows() const {
    std::vector<std::string> rows;
    char buf[256];
    for (const auto& t : terms) {
        std::snprintf(buf, sizeof buf, "%d,%d,%s,%.17g,%.17g,%.17g,%.17g", t.key.xi_x, t.key.xi_y,
                      bound_method_name(method), t.sup_bound, t.moment_factor, t.contribution,
                      total);
        rows.emplace_back(buf);
    }
    return rows;
}

std::string BoundReport::to_json() const {
    nlohmann::json j;
    j["order"] = order;
    j["method"] = bound_method_name(method);
    j["total"] = total;
    j["asymptotic_order_b"] = asymptotic_order_b;
    j["t_unreliable"] = t_unreliable;
    j["terms"] = nlohmann::json::array();
    for (const auto& t : terms)
        j["terms"].push_back({{"xi_x", t.key.xi_x},
                              {"xi_y", t.key.xi_y},
                              {"sup_bound", t.sup_bound},
                              {"moment_factor", t.moment_factor},
                              {"contribution", t.contribution}});
    return j.dump();
}

AsymptoticCoefficients asymptotic_coefficients(OuKind kind, int n, const ModelParams& p,
                                               double expiry) {
    if (p.rho > 0.0) throw std::domain_error("asymptotic_coefficients: requires rho <= 0");
    if (n < 1) throw std::invalid_argument("asymptotic_coefficients: n >= 1");
    const double a = p.cumulant.a, b = p.cumulant.b, lam = p.lambda, t = expiry;
    const double rho_abs = -p.rho;
    const double decay = std::exp(-lam * t * p.cumulant.kappa(p.rho));

    std::vector<double> f(n + 1, 0.0), g(n + 1, 0.0);
    const bool ig = kind == OuKind::inverse_gaussian;
    if (n >= 1) f[1] = 0.0;
    if (n >= 2) f[2] = 2.0; // phi_2 for the IG case equals 2 as well
    for (int m = 2; m < n; ++m) {
        double fact = 1.0; // m!/(m+1-i)!, equal to 1 at i = 1
        KahanSum<double> acc;
        acc.add(a * t * f[m]);
        for (int i = 1; i <= m - 1; ++i) {
            const double common = f[m + 1 - i] * t / std::pow(lam, i - 1);
            if (ig)
                acc.add(binom(m, i - 1) * ig_phi(i) * a / std::pow(b, i - 1) * common);
            else
                acc.add(i * a * fact * common);
            fact *= (m + 1 - i);
        }
        double tail_fact = 1.0;
        for (int i = 2; i <= m + 1; ++i) tail_fact *= i;
        if (ig)
            acc.add(ig_phi(m + 1) / (std::pow(lam, m - 1) * std::pow(b, m - 1)));
        else
            acc.add(tail_fact / std::pow(lam, m - 1));
        f[m + 1] = acc.value();
    }
    if (n >= 1) g[1] = 0.5 * decay + 1.5;
    for (int m = 1; m < n; ++m) {
        double fact = 1.0; // m!/(m+1-i)!
        KahanSum<double> acc;
        acc.add((0.5 * decay + 0.5) * a * rho_abs * lam * t * g[m]);
        for (int i = 1; i <= m; ++i) {
            if (ig)
                acc.add(binom(m, i - 1) * g[m + 1 - i] * ig_phi(i) * a * lam * t
                        * std::pow(rho_abs, i) / std::pow(b, i - 1));
            else
                acc.add(fact * g[m + 1 - i] * i * a * lam * t * std::pow(rho_abs, i));
            fact *= (m + 1 - i);
        }
        double tail_fact = 1.0;
        for (int i = 2; i <= m + 1; ++i) tail_fact *= i;
        if (ig)
            acc.add(ig_phi(m + 1) * std::pow(rho_abs, m) / std::pow(b, m));
        else
            acc.add(tail_fact * std::pow(rho_abs, m));
        g[m + 1] = acc.value();
    }

    AsymptoticCoefficients out;
    out.f_n = f[n];
    out.g_n = g[n];
    out.order_rho0 = ig ? n + 2 : n + 1;
    out.order_general = n + 1;
    return out;
}

} // namespace bns
