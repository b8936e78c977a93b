#include "bns/deriv_terms.hpp"

#include "bns/bs_math.hpp"
#include "bns/common.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace bns {

namespace {

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

constexpr __int128 int128_max = ((((__int128)1 << 126) - 1) << 1) + 1; // 2^127 - 1

__int128 checked_mul(__int128 a, __int128 b) {
    if (a != 0 && abs128(b) > int128_max / abs128(a))
        throw std::overflow_error("DerivTerm rational overflow; order too high");
    return a * b;
}

std::string int128_str(__int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    __int128 a = abs128(v);
    std::string s;
    while (a > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(a % 10)));
        a /= 10;
    }
    return neg ? "-" + s : s;
}

} // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) { normalize(); }

void Rational::normalize() {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
        den = -den;
        num = -num;
    }
    const __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    Rational r;
    const __int128 g = gcd128(den, o.den);
    const __int128 da = den / g, db = o.den / g;
    r.num = checked_mul(num, db);
    const __int128 t = checked_mul(o.num, da);
    r.num += t;
    r.den = checked_mul(checked_mul(da, g), db);
    r.normalize();
    return r;
}

Rational Rational::operator*(const Rational& o) const {
    Rational r;
    const __int128 g1 = gcd128(num, o.den);
    const __int128 g2 = gcd128(o.num, den);
    r.num = checked_mul(num / g1, o.num / g2);
    r.den = checked_mul(den / g2, o.den / g1);
    r.normalize();
    return r;
}

double Rational::to_double() const {
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

std::string Rational::to_string() const {
    if (den == 1) return int128_str(num);
    return int128_str(num) + "/" + int128_str(den);
}

bool DerivTerm::operator==(const DerivTerm& o) const {
    return a_coef == o.a_coef && x_pow == o.x_pow && sqrt_y_pow == o.sqrt_y_pow && poly == o.poly;
}

namespace {

void add_monomial(std::map<Monomial, Rational>& poly, Monomial m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = poly.emplace(m, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) poly.erase(it);
    }
}

} // namespace

DerivTerm canonicalize(DerivTerm t) {
    // The variables satisfy d+ - d- = sqrt(y); the polynomial ring is not
    // free, and derivative paths that commute analytically produce
    // representatives differing by multiples of (d+ - d- - sqrt(y)).
    // Eliminating sqrt(y) entirely yields a unique reduced form.
    {
        std::map<Monomial, Rational> reduced;
        for (const auto& [mono, c] : t.poly) {
            const auto [i, j, k] = mono;
            if (k == 0) {
                add_monomial(reduced, mono, c);
                continue;
            }
            // (d+ - d-)^k expanded binomially.
            for (int q = 0; q <= k; ++q) {
                Rational coef = c * Rational(static_cast<long long>(binom(k, q) + 0.5));
                if ((k - q) % 2) coef = -coef;
                add_monomial(reduced, {i + q, j + k - q, 0}, coef);
            }
        }
        t.poly = std::move(reduced);
    }
    for (auto it = t.poly.begin(); it != t.poly.end();)
        it = it->second.is_zero() ? t.poly.erase(it) : std::next(it);
    if (t.poly.empty()) {
        t.a_coef = Rational(0);
        return t;
    }
    // Integer poly with content 1; scale and sign move into A.
    __int128 den_lcm = 1;
    for (const auto& [mono, c] : t.poly) den_lcm = checked_mul(den_lcm / gcd128(den_lcm, c.den), c.den);
    __int128 num_gcd = 0;
    for (const auto& [mono, c] : t.poly)
        num_gcd = gcd128(num_gcd, checked_mul(c.num, den_lcm / c.den));
    const bool flip = (t.poly.begin()->second.num < 0);
    Rational scale;
    scale.num = flip ? -num_gcd : num_gcd;
    scale.den = den_lcm;
    scale.normalize();
    Rational inv;
    inv.num = scale.den;
    inv.den = scale.num;
    inv.normalize();
    for (auto& [mono, c] : t.poly) c = c * inv;
    t.a_coef = t.a_coef * scale;
    return t;
}

DerivTerm diff_x(const DerivTerm& t) {
    // d/dx [A x^-n y^-m/2 phi(d+) F] =
    //   A x^-(n+1) y^-(m+1)/2 phi(d+) [-(d+ + n sqrt(y)) F + F_1 + F_2]
    DerivTerm r;
    r.a_coef = t.a_coef;
    r.x_pow = t.x_pow + 1;
    r.sqrt_y_pow = t.sqrt_y_pow + 1;
    for (const auto& [mono, c] : t.poly) {
        const auto [i, j, k] = mono;
        add_monomial(r.poly, {i + 1, j, k}, -c);
        add_monomial(r.poly, {i, j, k + 1}, Rational(-t.x_pow) * c);
        if (i > 0) add_monomial(r.poly, {i - 1, j, k}, Rational(i) * c);
        if (j > 0) add_monomial(r.poly, {i, j - 1, k}, Rational(j) * c);
    }
    return canonicalize(std::move(r));
}

DerivTerm diff_y(const DerivTerm& t) {
    // d/dy [...] = (A/2) x^-n y^-(m+2)/2 phi(d+)
    //   [(d+ d- - m) F - d- F_1 - d+ F_2 + sqrt(y) F_3]
    DerivTerm r;
    r.a_coef = t.a_coef * Rational(1, 2);
    r.x_pow = t.x_pow;
    r.sqrt_y_pow = t.sqrt_y_pow + 2;
    for (const auto& [mono, c] : t.poly) {
        const auto [i, j, k] = mono;
        add_monomial(r.poly, {i + 1, j + 1, k}, c);
        add_monomial(r.poly, {i, j, k}, Rational(k - t.sqrt_y_pow) * c);
        if (i > 0) add_monomial(r.poly, {i - 1, j + 1, k}, Rational(-i) * c);
        if (j > 0) add_monomial(r.poly, {i + 1, j - 1, k}, Rational(-j) * c);
    }
    return canonicalize(std::move(r));
}

DerivTerm seed_term(const DerivKey& key) {
    DerivTerm t;
    if (key == DerivKey{2, 0}) {
        // phi(d+) / (x sqrt(y))
        t.a_coef = Rational(1);
        t.x_pow = 1;
        t.sqrt_y_pow = 1;
        t.poly[{0, 0, 0}] = Rational(1);
    } else if (key == DerivKey{1, 1}) {
        // -phi(d+) d- / (2 y)
        t.a_coef = Rational(-1, 2);
        t.x_pow = 0;
        t.sqrt_y_pow = 2;
        t.poly[{0, 1, 0}] = Rational(1);
    } else if (key == DerivKey{0, 2}) {
        // x phi(d+) (d+ d- - 1) / (4 y^{3/2})
        t.a_coef = Rational(1, 4);
        t.x_pow = -1;
        t.sqrt_y_pow = 3;
        t.poly[{1, 1, 0}] = Rational(1);
        t.poly[{0, 0, 0}] = Rational(-1);
    } else {
        throw std::invalid_argument("seed_term: not a second-order key");
    }
    return t;
}

const DerivTerm& bs_partial(const DerivKey& key) {
    if (key.xi_x < 0 || key.xi_y < 0 || key.order() < 2)
        throw std::invalid_argument("bs_partial: |key| >= 2 required");
    static std::map<DerivKey, DerivTerm> cache;
    static std::shared_mutex mtx;
    {
        std::shared_lock lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    DerivTerm term;
    if (key.order() == 2) {
        term = seed_term(key);
    } else if (key.xi_y > 0) {
        term = diff_y(bs_partial({key.xi_x, key.xi_y - 1}));
    } else {
        term = diff_x(bs_partial({key.xi_x - 1, 0}));
    }
    std::unique_lock lock(mtx);
    return cache.emplace(key, std::move(term)).first->second;
}

namespace {

// Dense coefficient grid for nested Horner evaluation.
struct CompiledTerm {
    int imax = 0, jmax = 0, kmax = 0;
    int x_pow = 0, sqrt_y_pow = 1;
    double a = 0.0;
    std::vector<double> grid;

    explicit CompiledTerm(const DerivTerm& term) {
        for (const auto& [mono, c] : term.poly) {
            imax = std::max(imax, mono[0]);
            jmax = std::max(jmax, mono[1]);
            kmax = std::max(kmax, mono[2]);
        }
        grid.assign(static_cast<std::size_t>(imax + 1) * (jmax + 1) * (kmax + 1), 0.0);
        for (const auto& [mono, c] : term.poly)
            grid[(static_cast<std::size_t>(mono[0]) * (jmax + 1) + mono[1]) * (kmax + 1)
                 + mono[2]] = c.to_double();
        x_pow = term.x_pow;
        sqrt_y_pow = term.sqrt_y_pow;
        a = term.a_coef.to_double();
    }

    double eval(double x, double y, double strike, double r_t) const {
        const auto [dp, dm] = d_pm(x, y, strike, r_t);
        const double sy = std::sqrt(y);
        // Nested Horner: polynomial in d+, coefficients polynomials in d-,
        // whose coefficients are polynomials in sqrt(y).
        double f = 0.0;
        for (int i = imax; i >= 0; --i) {
            double fj = 0.0;
            for (int j = jmax; j >= 0; --j) {
                double fk = 0.0;
                const double* row =
                    &grid[(static_cast<std::size_t>(i) * (jmax + 1) + j) * (kmax + 1)];
                for (int k = kmax; k >= 0; --k) fk = fk * sy + row[k];
                fj = fj * dm + fk;
            }
            f = f * dp + fj;
        }
        const double lead = a * std::pow(x, -x_pow) * std::pow(y, -0.5 * sqrt_y_pow);
        return lead * norm_pdf(dp) * f;
    }
};

} // namespace

double eval_term(const DerivTerm& term, double x, double y, double strike, double r_t) {
    return CompiledTerm(term).eval(x, y, strike, r_t);
}

double eval_partial(const DerivKey& key, double x, double y, double strike, double r_t) {
    static std::map<DerivKey, CompiledTerm> cache;
    static std::shared_mutex mtx;
    {
        std::shared_lock lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second.eval(x, y, strike, r_t);
    }
    CompiledTerm compiled(bs_partial(key));
    std::unique_lock lock(mtx);
    return cache.emplace(key, std::move(compiled)).first->second.eval(x, y, strike, r_t);
}

std::string DerivTerm::to_text() const {
    std::string s = a_coef.to_string();
    if (x_pow != 0) s += " / x^" + std::to_string(x_pow);
    s += " / y^(" + std::to_string(sqrt_y_pow) + "/2) * phi(d+) * (";
    bool first = true;
    for (const auto& [mono, c] : poly) {
        std::string piece = c.to_string();
        if (mono[0] > 0) piece += " d+^" + std::to_string(mono[0]);
        if (mono[1] > 0) piece += " d-^" + std::to_string(mono[1]);
        if (mono[2] > 0) piece += " sy^" + std::to_string(mono[2]);
        if (!first && c.num > 0) s += " + ";
        else if (!first) s += " ";
        s += piece;
        first = false;
    }
    return s + ")";
}

} // namespace bns
