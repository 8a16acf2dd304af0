#pragma once

#include <cmath>
#include <cstdint>

namespace skp {

// Deterministic 64-bit generator (SplitMix64). All randomized artifacts in the
// repo (weight vectors, synthetic instances) derive from this exact algorithm
// so that a (seed, n) pair reproduces the same stream on any platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1), 53 usable bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1]; never zero, safe for log().
    double next_unit_open() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Uniform integer in [0, bound). Rejection-free modulo is fine here; the
    // bias for bound << 2^64 is far below anything the tests can observe.
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

private:
    std::uint64_t state_;
};

// Standard normal pairs via the trigonometric Box-Muller transform. Pair-based
// so that consumers drawing k variates use exactly ceil(k/2) u-pairs.
class NormalSampler {
public:
    explicit NormalSampler(SplitMix64& rng) : rng_(&rng) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_->next_unit_open();
        const double u2 = rng_->next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    SplitMix64* rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace skp
