// Test-only finite-difference oracle in quad precision. Central stencils
// are generated by solving the moment conditions, applied at step h and
// h/2, then Richardson-extrapolated. Independent of the term algebra under
// test; the only shared ingredient is plain arithmetic.
#pragma once

#include <quadmath.h>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fd {

using quad = __float128;

inline quad qexp(quad x) { return expq(x); }
inline quad qlog(quad x) { return logq(x); }
inline quad qsqrt(quad x) { return sqrtq(x); }
inline quad qerfc(quad x) { return erfcq(x); }

// Weights w_{-M..M} with sum_j w_j (j)^t = p! [t == p] for t = 0..2M,
// so that f^(p)(x) ~= h^-p sum_j w_j f(x + j h).
inline std::vector<quad> central_stencil(int p, int M) {
    const int n = 2 * M + 1;
    if (p >= n) throw std::invalid_argument("central_stencil: too few points");
    std::vector<std::vector<quad>> a(n, std::vector<quad>(n + 1, 0));
    for (int t = 0; t < n; ++t) {
        for (int j = -M; j <= M; ++j) {
            quad pw = 1;
            for (int e = 0; e < t; ++e) pw *= j;
            a[t][j + M] = pw;
        }
        quad rhs = 0;
        if (t == p) {
            rhs = 1;
            for (int e = 2; e <= p; ++e) rhs *= e;
        }
        a[t][n] = rhs;
    }
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int row = col + 1; row < n; ++row)
            if (fabsq(a[row][col]) > fabsq(a[piv][col])) piv = row;
        std::swap(a[col], a[piv]);
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            const quad f = a[row][col] / a[col][col];
            for (int c2 = col; c2 <= n; ++c2) a[row][c2] -= f * a[col][c2];
        }
    }
    std::vector<quad> w(n);
    for (int j = 0; j < n; ++j) w[j] = a[j][n] / a[j][j];
    return w;
}

// p-th derivative of a one-variable function, Richardson over h and h/2.
template <typename F>
quad deriv(F&& f, quad x, int p, quad h) {
    const int M = (p + 1) / 2 + 1;
    const auto w = central_stencil(p, M);
    const auto apply = [&](quad step) {
        quad acc = 0;
        for (int j = -M; j <= M; ++j) acc += w[j + M] * f(x + j * step);
        quad hp = 1;
        for (int e = 0; e < p; ++e) hp *= step;
        return acc / hp;
    };
    const quad d1 = apply(h), d2 = apply(h / 2);
    int e = 2 * M + 1 - p;
    if (e % 2) ++e;
    quad two_e = 1;
    for (int i = 0; i < e; ++i) two_e *= 2;
    return (two_e * d2 - d1) / (two_e - 1);
}

// Mixed partial d^{px+py} f / dx^{px} dy^{py} via nested stencils.
template <typename F>
quad deriv2d(F&& f, quad x, quad y, int px, int py, quad hx, quad hy) {
    if (px == 0) return deriv([&](quad yy) { return f(x, yy); }, y, py, hy);
    if (py == 0) return deriv([&](quad xx) { return f(xx, y); }, x, px, hx);
    const int M = (px + 1) / 2 + 1;
    const auto w = central_stencil(px, M);
    const auto apply = [&](quad step) {
        quad acc = 0;
        for (int j = -M; j <= M; ++j)
            acc += w[j + M] * deriv([&](quad yy) { return f(x + j * step, yy); }, y, py, hy);
        quad hp = 1;
        for (int e = 0; e < px; ++e) hp *= step;
        return acc / hp;
    };
    const quad d1 = apply(hx), d2 = apply(hx / 2);
    int e = 2 * M + 1 - px;
    if (e % 2) ++e;
    quad two_e = 1;
    for (int i = 0; i < e; ++i) two_e *= 2;
    return (two_e * d2 - d1) / (two_e - 1);
}

// Quad-precision Black-Scholes put, the reference function for the
// derivative-engine tests.
inline quad bs_put_q(quad x, quad y, quad strike, quad r_t) {
    const quad sy = qsqrt(y);
    const quad core = (qlog(x / strike) + r_t) / sy;
    const quad dp = core + sy / 2, dm = core - sy / 2;
    const quad inv_sqrt2 = qsqrt(quad(0.5));
    const auto cdf = [&](quad z) { return qerfc(-z * inv_sqrt2) / 2; };
    return strike * qexp(-r_t) * cdf(-dm) - x * cdf(-dp);
}

} // namespace fd
