#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace singlab {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++, seeded via splitmix64.  Hand-rolled so that identical
// (seed, stream) pairs produce identical doubles on every platform,
// independent of the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    // Independent substream for a parallel task: mixes the stream index
    // into the seed before expansion.
    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = stream * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL;
        return Rng(seed ^ splitmix64_next(sm));
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1).
    double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    // Standard normal via Box-Muller (polar form avoided to keep the
    // consumption of the underlying stream fixed per call pair).
    double normal() {
        double u = u01();
        double v = u01();
        if (u < 0x1.0p-53) u = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586476925286766559 * v);
    }

    // Uniform direction on the unit sphere in R^n.
    std::vector<double> unit_vector(int n) {
        std::vector<double> v(n);
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (int i = 0; i < n; ++i) {
                v[i] = normal();
                norm2 += v[i] * v[i];
            }
        } while (norm2 < 1e-30);
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : v) x *= inv;
        return v;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

}  // namespace singlab
