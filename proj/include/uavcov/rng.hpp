#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace uavcov {

/// SplitMix64 finaliser; decorrelates arbitrary 64-bit keys.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Counter-based stream derivation: any (root seed, key path) maps to a
/// decorrelated stream seed, so parallel consumers never share state and the
/// assignment of work to threads cannot change the draws.
inline uint64_t derive_seed(uint64_t root, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = mix64(root ^ 0x6a09e667f3bcc909ull);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

/// Small deterministic generator (SplitMix64 state walk) with the draw
/// transforms the simulator needs. Streams are cheap to construct; make one
/// per drop or per node rather than sharing.
class RngStream {
  public:
    explicit RngStream(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Strictly positive uniform, safe under log().
    double uniform_pos() {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return u;
    }

    double exponential() { return -std::log(uniform_pos()); }

    /// Box-Muller pair; consumes exactly two uniforms.
    std::pair<double, double> normal_pair() {
        const double r = std::sqrt(2.0 * exponential());
        const double phi = 2.0 * M_PI * uniform();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    /// Exact Poisson count: multiplicative inversion for small means,
    /// Hormann's transformed rejection (PTRS) otherwise.
    int poisson(double mean);

    /// Normalised Rician power gain |h|^2 with factor K (K = 0 is Rayleigh).
    double rician_power(double k_factor) {
        if (k_factor <= 0.0) return exponential();
        const double sigma2 = 0.5 / (k_factor + 1.0);
        const double nu = std::sqrt(k_factor / (k_factor + 1.0));
        const auto [x, y] = normal_pair();
        const double sigma = std::sqrt(sigma2);
        const double a = nu + sigma * x;
        const double b = sigma * y;
        return a * a + b * b;
    }

  private:
    uint64_t state_;
};

inline int RngStream::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) {
        const double limit = std::exp(-mean);
        int k = 0;
        double prod = uniform_pos();
        while (prod > limit) {
            prod *= uniform_pos();
            ++k;
        }
        return k;
    }
    // PTRS (Hormann 1993)
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        const double u = uniform() - 0.5;
        const double v = uniform_pos();
        const double us = 0.5 - std::abs(u);
        const double kd = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<int>(kd);
        if (kd < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kd * log_mean - mean - std::lgamma(kd + 1.0)) {
            return static_cast<int>(kd);
        }
    }
}

}  // namespace uavcov
