#ifndef ISPKIT_CORE_RNG_HPP
#define ISPKIT_CORE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace isp {

// 64-bit FNV-1a. Used wherever a hash has to be stable across platforms
// and library versions (std::hash gives no such guarantee).
inline uint64_t fnv1a(std::string_view s, uint64_t seed = 14695981039346656037ull) {
    uint64_t h = seed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Splitmix64 generator. All stochastic behaviour in the toolkit goes
// through this type so that runs are byte-reproducible on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, n)
    uint64_t uniform(uint64_t n) {
        // rejection sampling keeps the draw unbiased
        uint64_t limit = ~uint64_t(0) - (~uint64_t(0) % n);
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    // uniform in [0, 1)
    double uniform_real() { return double(next_u64() >> 11) * (1.0 / 9007199254740992.0); }

    bool bernoulli(double p) { return uniform_real() < p; }

    double normal(double mean = 0.0, double stddev = 1.0) {
        // Box-Muller, one value per call
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform_real();
        double u2 = uniform_real();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // derived stream: independent generator for a sub-task, pure in (parent seed, tag)
    Rng fork(uint64_t tag) const { return Rng(mix_seed(state_, tag)); }
    Rng fork(std::string_view tag) const { return Rng(mix_seed(state_, fnv1a(tag))); }

private:
    uint64_t state_;
};

} // namespace isp

#endif
