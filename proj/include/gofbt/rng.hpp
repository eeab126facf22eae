#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

// Portable random number generation. All samplers are written out in full
// (no std::distributions) so that a given seed produces the same stream on
// every platform and standard library; experiment outputs are required to be
// byte-reproducible.

namespace gofbt::rng {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream key from a base seed and up to three
/// context words (e.g. trial index, sample size, purpose tag).
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a = 0,
                                   std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = seed;
    std::uint64_t k = splitmix64_next(s);
    s ^= a + 0x9e3779b97f4a7c15ULL;
    k ^= splitmix64_next(s);
    s ^= b + 0xd1b54a32d192ed03ULL;
    k ^= splitmix64_next(s);
    s ^= c + 0x8cb92ba72f3d8dd7ULL;
    k ^= splitmix64_next(s);
    return k;
}

// xoshiro256++ (Blackman/Vigna), seeded through splitmix64.
class Xoshiro256 {
  public:
    explicit Xoshiro256(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
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

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

/// Uniform draw on the open interval (0,1). An exact zero (probability
/// 2^-53 per draw) is redrawn so downstream logarithms stay finite; 1.0 is
/// unreachable by construction.
inline double uniform01(Xoshiro256& gen) {
    for (;;) {
        const double u = static_cast<double>(gen.next() >> 11) * 0x1.0p-53;
        if (u > 0.0) return u;
    }
}

/// Standard normal via Box-Muller.
inline double normal(Xoshiro256& gen) {
    const double u1 = uniform01(gen);
    const double u2 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
}

/// Gamma(shape, scale=1) for shape >= 1, Marsaglia-Tsang squeeze method.
inline double gamma(Xoshiro256& gen, double shape) {
    if (shape < 1.0) throw std::invalid_argument("gamma sampler requires shape >= 1");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal(gen);
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform01(gen);
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

/// Student-t with nu > 0 degrees of freedom: Z / sqrt(ChiSq_nu / nu).
inline double student_t(Xoshiro256& gen, double nu) {
    const double z = normal(gen);
    const double chi2 = 2.0 * gamma(gen, nu / 2.0);
    return z / std::sqrt(chi2 / nu);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

}  // namespace gofbt::rng
