#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pairlink {

/// Small counter-seeded generator (xoshiro256++ over splitmix64 expansion).
/// All samplers below map engine bits to values explicitly, so streams are
/// reproducible across platforms and standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : s_) word = splitmix64(x);
    }

    /// Independent stream for (seed, stream_index), for chunked parallel runs.
    static Rng stream(uint64_t seed, uint64_t stream_index) {
        uint64_t x = seed;
        uint64_t a = splitmix64(x);
        x ^= 0x9e3779b97f4a7c15ull * (stream_index + 1);
        return Rng(a ^ splitmix64(x));
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

    /// Uniform in (0, 1]; never returns 0 so log() is safe.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() <= p; }

    /// Standard normal, Box-Muller; caches the second value of each pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double a = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Poisson count by uniform products; intended for small means.
    uint32_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double limit = std::exp(-mean);
        uint32_t k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

private:
    static uint64_t splitmix64(uint64_t& x) {
        x += 0x9e3779b97f4a7c15ull;
        uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace pairlink
