#pragma once

#include <cstdint>

namespace rtb {

// splitmix64; used to derive independent sub-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix_seed(seed + 0x632be59bd9b4e019ULL * (stream + 1));
}

// xoshiro-free minimal generator: splitmix64 counter stream. Statistically
// solid for Monte Carlo use and bit-reproducible across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return mix_seed(state_ += 0x9e3779b97f4a7c15ULL); }

    // Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

private:
    std::uint64_t state_;
};

}  // namespace rtb
