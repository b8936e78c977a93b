#include "bns/cumulant.hpp"

#include "bns/common.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace bns {

namespace {

constexpr int max_deriv_order = 32;

// base^(-p/2) for p possibly large; log-space when the exponent is big.
double neg_half_pow(double base, int p) {
    const double e = 0.5 * p;
    if (e * std::abs(std::log(base)) > 20.0) return std::exp(-e * std::log(base));
    return std::pow(base, -e);
}

} // namespace

double ig_phi(int n) {
    static const std::array<double, max_deriv_order + 1> table = [] {
        std::array<double, max_deriv_order + 1> t{};
        t[1] = 1.0;
        for (int i = 2; i <= max_deriv_order; ++i)
            t[i] = t[i - 1] * (2.0 * i - 3.0) + double_factorial_odd(i - 1);
        return t;
    }();
    if (n < 1 || n > max_deriv_order)
        throw std::domain_error("ig_phi: order outside precomputed range");
    return table[n];
}

double CumulantModel::kappa_hat() const {
    return kind == OuKind::inverse_gaussian ? 0.5 * b * b : b;
}

double CumulantModel::kappa(double theta) const {
    if (theta >= kappa_hat()) throw std::domain_error("kappa: theta >= kappa_hat");
    if (kind == OuKind::inverse_gaussian) return a * theta / std::sqrt(b * b - 2.0 * theta);
    return a * theta / (b - theta);
}

double CumulantModel::kappa_deriv(int n, double theta) const {
    if (n < 1) throw std::invalid_argument("kappa_deriv: n >= 1 required");
    if (n > max_deriv_order) throw std::domain_error("kappa_deriv: order beyond table");
    if (theta >= kappa_hat()) throw std::domain_error("kappa_deriv: theta >= kappa_hat");
    if (kind == OuKind::inverse_gaussian) {
        const double base = b * b - 2.0 * theta;
        return ig_phi(n) * a * neg_half_pow(base, 2 * n - 1)
               + double_factorial_odd(n) * a * theta * neg_half_pow(base, 2 * n + 1);
    }
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    const double base = b - theta;
    return fact * a * neg_half_pow(base, 2 * n) + fact * a * theta * neg_half_pow(base, 2 * n + 2);
}

std::string CumulantModel::describe() const {
    const char* name = kind == OuKind::inverse_gaussian ? "ig" : "gamma";
    return std::string(name) + "(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")";
}

} // namespace bns
