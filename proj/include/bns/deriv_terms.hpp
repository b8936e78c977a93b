#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bns {

/// Exact rational over 128-bit integers. Coefficients of the derivative
/// polynomials are dyadic rationals times small integers; 128 bits leave
/// ample headroom through order ~16, and arithmetic throws on overflow
/// rather than silently wrapping.
struct Rational {
    __int128 num = 0;
    __int128 den = 1;

    Rational() = default;
    Rational(long long n) : num(n) {}
    Rational(long long n, long long d);

    void normalize();
    Rational operator+(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator-() const { Rational r = *this; r.num = -r.num; return r; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool is_zero() const { return num == 0; }
    double to_double() const;
    std::string to_string() const;
};

// Exponents (i, j, k) of d+^i d-^j (sqrt y)^k.
using Monomial = std::array<int, 3>;

struct DerivKey {
    int xi_x = 0;
    int xi_y = 0;
    int order() const { return xi_x + xi_y; }
    auto operator<=>(const DerivKey&) const = default;
};

/// One partial derivative of BS_put in structured form:
///
///   A / (x^n y^{m/2}) * phi(d+) * F(d+, d-, sqrt y)
///
/// with F a polynomial with exact rational coefficients. Canonical form:
/// sqrt(y) eliminated from F through the relation d+ - d- = sqrt(y) (the
/// ring is not free, and path equality only holds modulo it), monomials
/// sorted lexicographically, zero coefficients pruned, integer poly with
/// content 1 and positive leading coefficient (scale and sign in a_coef).
struct DerivTerm {
    Rational a_coef;
    int x_pow = 0;      // n
    int sqrt_y_pow = 1; // m
    std::map<Monomial, Rational> poly;

    bool operator==(const DerivTerm& o) const;

    // Plain-text rendering for docs and debugging.
    std::string to_text() const;
};

// Differentiation steps preserving the structured form; each maps a
// valid term to a canonical term one order higher.
DerivTerm diff_x(const DerivTerm& t);
DerivTerm diff_y(const DerivTerm& t);
DerivTerm canonicalize(DerivTerm t);

// The three second-order seed terms ((2,0), (1,1), (0,2)).
DerivTerm seed_term(const DerivKey& key);

// Structured partial derivative for |key| >= 2, memoized. Construction is
// deterministic, so concurrent duplicate builds are harmless.
const DerivTerm& bs_partial(const DerivKey& key);

// Evaluate a partial derivative at (x, y) with nested Horner accumulation.
double eval_partial(const DerivKey& key, double x, double y, double strike, double r_t);
double eval_term(const DerivTerm& term, double x, double y, double strike, double r_t);

} // namespace bns
