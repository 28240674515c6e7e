#pragma once

#include <cmath>
#include <cstdint>

namespace mirnet {

/// Expands a 64-bit seed into a stream of well-mixed 64-bit values.
/// Standard splitmix64 (Steele/Lea/Flood); used for seeding and for
/// deriving independent child seeds from a master seed.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

/// Derives an independent child seed from a master seed and a stream index.
/// Used so ensemble members, presets, and per-dataset generators get
/// decorrelated streams while staying reproducible from one master seed.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
    SplitMix64 sm(master);
    uint64_t base = sm.next();
    SplitMix64 sm2(base ^ (stream * 0x9e3779b97f4a7c15ULL));
    sm2.next();
    return sm2.next();
}

/// Deterministic PRNG: xoshiro256++ seeded via splitmix64.
///
/// std::mt19937 plus std:: distributions would not give bit-reproducible
/// streams across standard library implementations; this generator plus the
/// explicit uniform/normal mappings below does (normal() additionally
/// depends on libm's log/cos/sin, so cross-libm runs agree to rounding).
class Rng {
  public:
    explicit Rng(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& word : s_) word = sm.next();
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), using the top 53 bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; generates pairs, caches the second.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1] so log(u1) is finite.
        double u1 = 1.0 - uniform01();
        double u2 = uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Uniform integer in [0, n). Rejection-free modulo bias is negligible
    /// for n << 2^64 but we reject anyway to keep draws exact.
    uint64_t below(uint64_t n) {
        // Lemire-style rejection: draw until the value falls in the largest
        // multiple of n that fits in 64 bits.
        uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace mirnet
