#include "bns/bs_math.hpp"

#include "bns/common.hpp"

#include <cmath>
#include <stdexcept>

namespace bns {

std::pair<double, double> d_pm(double x, double y, double strike, double r_t) {
    if (!(x > 0.0) || !(y > 0.0) || !(strike > 0.0))
        throw std::domain_error("d_pm: x, y, strike must be positive");
    const double sy = std::sqrt(y);
    const double core = (std::log(x / strike) + r_t) / sy;
    const double dp = core + 0.5 * sy;
    // d- derived from d+ so the identity d+ - d- = sqrt(y) holds exactly.
    return {dp, dp - sy};
}

double bs_put(double x, double y, double strike, double r_t) {
    const auto [dp, dm] = d_pm(x, y, strike, r_t);
    return strike * std::exp(-r_t) * norm_cdf(-dm) - x * norm_cdf(-dp);
}

double bs_call(double x, double y, double strike, double r_t) {
    const auto [dp, dm] = d_pm(x, y, strike, r_t);
    return x * norm_cdf(dp) - strike * std::exp(-r_t) * norm_cdf(dm);
}

double bs_d2_dx2(double x, double y, double strike, double r_t) {
    const auto [dp, dm] = d_pm(x, y, strike, r_t);
    (void)dm;
    return norm_pdf(dp) / (x * std::sqrt(y));
}

double bs_d2_dy2(double x, double y, double strike, double r_t) {
    const auto [dp, dm] = d_pm(x, y, strike, r_t);
    return x * norm_pdf(dp) * (dp * dm - 1.0) / (4.0 * y * std::sqrt(y));
}

double bs_d2_dxdy(double x, double y, double strike, double r_t) {
    const auto [dp, dm] = d_pm(x, y, strike, r_t);
    (void)x;
    return -norm_pdf(dp) * dm / (2.0 * y);
}

} // namespace bns
