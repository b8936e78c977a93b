#pragma once

#include <cmath>
#include <cstdint>

namespace bns {

// Counter-seeded xoshiro256++ streams: path i always draws from the same
// stream regardless of thread count, so results are bit-stable under any
// parallel schedule. Distributions are hand-rolled for the same reason
// (std::<distribution> output is implementation-defined).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        for (auto& w : state_) {
            // splitmix64
            x += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform on [2^-53, 1): never 0, safe under log.
    double uniform() {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform(), u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    double exponential(double rate) { return -std::log(1.0 - uniform() + 0x1.0p-53) / rate; }

    // Knuth multiplication; large means split by Poisson additivity.
    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean > 60.0) {
            // explicit sequencing: operand order of + is unspecified
            const long head = poisson(0.5 * mean);
            return head + poisson(mean - 0.5 * mean);
        }
        const double limit = std::exp(-mean);
        long count = -1;
        double prod = 1.0;
        do {
            prod *= uniform();
            ++count;
        } while (prod > limit);
        return count;
    }

    // Inverse Gaussian by the two-root inversion method
    // (mean mu, shape lambda).
    double inverse_gaussian(double mu, double lambda) {
        const double v = normal();
        const double y = v * v;
        const double x = mu + mu * mu * y / (2.0 * lambda)
                         - mu / (2.0 * lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
        if (uniform() <= mu / (mu + x)) return x > 0.0 ? x : mu * 1e-300;
        return mu * mu / x;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace bns
