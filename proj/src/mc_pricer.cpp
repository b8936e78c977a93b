#include "bns/mc_pricer.hpp"

#include "bns/bs_math.hpp"
#include "bns/common.hpp"
#include "bns/rng.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

namespace bns {

namespace {

struct PathState {
    double z = 0.0;        // Z_{lambda T}
    double i_jump = 0.0;   // int alpha dZ
};

// Exact average of alpha_{s,T} over one grid interval; spreading an
// interval's IG increment with this weight keeps E[I_T] exact.
double interval_alpha_weight(double lambda, double t0, double t1, double expiry) {
    const double width = t1 - t0;
    const double decay =
        (std::exp(-lambda * (expiry - t1)) - std::exp(-lambda * (expiry - t0))) / lambda;
    return (width - decay) / (lambda * width);
}

} // namespace

PathBundle simulate_paths(const ModelParams& p, double expiry, const McSettings& s) {
    require_valid(p);
    if (s.paths < 1) throw std::invalid_argument("simulate_paths: paths >= 1");
    const auto& cm = p.cumulant;
    const double lam = p.lambda;
    const double a0t = alpha(lam, 0.0, expiry);
    const double floor_i = p.sigma0_sq * a0t;
    const double kappa_rho = cm.kappa(p.rho);
    const double drift = std::log(p.s0) + p.r * expiry - lam * kappa_rho * expiry;

    const bool is_ig = cm.kind == OuKind::inverse_gaussian;
    const int steps = std::max(1, static_cast<int>(std::ceil(s.grid_steps_per_year * expiry)));
    const double dt = expiry / steps;

    // gamma BDLP: compound Poisson, rate a*lambda, Exp(b) sizes.
    // IG BDLP: IG increments (delta = a/2 per unit lambda-time) plus a
    // compound Poisson of squared normals, rate a*b*lambda/2, sizes v^2/b^2.
    const double cp_rate = is_ig ? 0.5 * cm.a * cm.b * lam : cm.a * lam;
    const double ig_delta = 0.5 * cm.a * lam * dt;
    const double ig_mu = ig_delta / cm.b;
    const double ig_shape = ig_delta * ig_delta;

    std::vector<double> weights;
    if (is_ig) {
        weights.resize(steps);
        for (int i = 0; i < steps; ++i)
            weights[i] = interval_alpha_weight(lam, i * dt, (i + 1) * dt, expiry);
    }

    PathBundle bundle;
    bundle.log_price.resize(s.paths);
    bundle.integrated_var.resize(s.paths);
    bundle.martingale_factor.resize(s.paths);

    const long pairs = s.antithetic ? (s.paths + 1) / 2 : s.paths;
    const int threads = s.threads > 0 ? s.threads : omp_get_max_threads();

#pragma omp parallel for schedule(static) num_threads(threads)
    for (long pair = 0; pair < pairs; ++pair) {
        RngStream rng(s.seed, static_cast<std::uint64_t>(pair));
        PathState st;
        if (is_ig) {
            for (int i = 0; i < steps; ++i) {
                const double g = rng.inverse_gaussian(ig_mu, ig_shape);
                st.z += g;
                st.i_jump += g * weights[i];
            }
        }
        const long jumps = rng.poisson(cp_rate * expiry);
        for (long j = 0; j < jumps; ++j) {
            const double t = expiry * rng.uniform();
            double size;
            if (is_ig) {
                const double v = rng.normal();
                size = v * v / (cm.b * cm.b);
            } else {
                size = rng.exponential(cm.b);
            }
            st.z += size;
            st.i_jump += size * alpha(lam, t, expiry);
        }
        const double i_t = floor_i + st.i_jump;
        const double p_t = std::exp(p.rho * st.z - lam * expiry * kappa_rho);
        const double gauss = rng.normal();

        const auto store = [&](long idx, double xi) {
            bundle.integrated_var[idx] = i_t;
            bundle.martingale_factor[idx] = p_t;
            bundle.log_price[idx] = drift - 0.5 * i_t + p.rho * st.z + std::sqrt(i_t) * xi;
        };
        if (s.antithetic) {
            const long first = 2 * pair;
            store(first, gauss);
            if (first + 1 < s.paths) store(first + 1, -gauss);
        } else {
            store(pair, gauss);
        }
    }
    return bundle;
}

McPrice mc_put_price(const ModelParams& p, const OptionSpec& opt, const PathBundle& bundle) {
    const long n = static_cast<long>(bundle.log_price.size());
    const double r_t = p.r * opt.expiry;
    const double disc = std::exp(-r_t);
    KahanSum<double> cond, cond_sq, plain, plain_sq;
    for (long i = 0; i < n; ++i) {
        const double c = bs_put(p.s0 * bundle.martingale_factor[i], bundle.integrated_var[i],
                                opt.strike, r_t);
        const double payoff = disc * std::max(opt.strike - std::exp(bundle.log_price[i]), 0.0);
        cond.add(c);
        cond_sq.add(c * c);
        plain.add(payoff);
        plain_sq.add(payoff * payoff);
    }
    McPrice out;
    out.price = cond.value() / n;
    out.plain_price = plain.value() / n;
    const double var_c = std::max(0.0, cond_sq.value() / n - out.price * out.price);
    const double var_p = std::max(0.0, plain_sq.value() / n - out.plain_price * out.plain_price);
    out.std_error = std::sqrt(var_c / n);
    out.plain_std_error = std::sqrt(var_p / n);
    return out;
}

McPrice mc_put_price(const ModelParams& p, const OptionSpec& opt, const McSettings& s) {
    return mc_put_price(p, opt, simulate_paths(p, opt.expiry, s));
}

McMoment mc_central_mixed_moment(const PathBundle& bundle, int n, int k, double mean_i) {
    const long count = static_cast<long>(bundle.log_price.size());
    KahanSum<double> sum, sum_sq;
    for (long i = 0; i < count; ++i) {
        double v = 1.0;
        for (int e = 0; e < n - k; ++e) v *= (bundle.martingale_factor[i] - 1.0);
        for (int e = 0; e < k; ++e) v *= (bundle.integrated_var[i] - mean_i);
        sum.add(v);
        sum_sq.add(v * v);
    }
    McMoment out;
    out.value = sum.value() / count;
    const double var = std::max(0.0, sum_sq.value() / count - out.value * out.value);
    out.std_error = std::sqrt(var / count);
    return out;
}

} // namespace bns
