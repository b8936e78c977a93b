#include "bns/common.hpp"

#include <mutex>

namespace bns {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    static std::vector<std::vector<double>> table;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    if (n >= static_cast<int>(table.size())) {
        for (int row = static_cast<int>(table.size()); row <= n; ++row) {
            std::vector<double> r(row + 1, 1.0);
            for (int j = 1; j < row; ++j) r[j] = table[row - 1][j - 1] + table[row - 1][j];
            table.push_back(std::move(r));
        }
    }
    return table[n][k];
}

double double_factorial_odd(int n) {
    // (2n-1)!!, with (-1)!! = 1.
    constexpr int max_n = 32;
    static const std::array<double, max_n + 1> table = [] {
        std::array<double, max_n + 1> t{};
        t[0] = 1.0;
        for (int i = 1; i <= max_n; ++i) t[i] = t[i - 1] * (2.0 * i - 1.0);
        return t;
    }();
    if (n < 0 || n > max_n)
        throw std::domain_error("double_factorial_odd: order outside precomputed range");
    return table[n];
}

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n) {
    // Newton iteration on the Legendre recurrence.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

} // namespace bns
