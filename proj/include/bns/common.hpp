#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bns {

inline constexpr double pi = 3.14159265358979323846;

// Kahan-compensated accumulator; drop-in for += / read.
template <typename Value>
struct KahanSum {
    Value sum = Value{0};
    Value carry = Value{0};

    void add(Value v) {
        const Value y = v - carry;
        const Value t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    Value value() const { return sum; }
};

// Binomial coefficients C(n,k) from the Pascal recurrence, cached.
// Exact in double up to n = 56; orders beyond 40 are rejected upstream.
double binom(int n, int k);

// (2n-1)!! for n >= 0 (table to n = 32, errors out beyond).
double double_factorial_odd(int n);

// Standard normal density and CDF. The CDF goes through erfc so the
// deep tails (|z| > 8) keep full relative accuracy.
inline double norm_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * pi); }
inline double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Nodes/weights of an n-point Gauss-Legendre rule on [-1,1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
    explicit GaussLegendre(int n);
};

// Integrate f over [a,b] with a composite Gauss-Legendre rule
// (panels of 16 nodes). Deterministic; meant for smooth integrands.
template <typename F>
double integrate_gl(F&& f, double a, double b, int panels) {
    static const GaussLegendre rule(16);
    KahanSum<double> acc;
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * w;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double x = lo + 0.5 * w * (rule.nodes[i] + 1.0);
            acc.add(0.5 * w * rule.weights[i] * f(x));
        }
    }
    return acc.value();
}

} // namespace bns
