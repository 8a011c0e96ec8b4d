#pragma once

#include <cstdint>

#include "fuzzdyn/rational.hpp"

namespace fuzzdyn {

// splitmix64. Deterministic across platforms and standard-library versions,
// unlike <random> distributions; randomized suites must reproduce
// byte-identical reports from a seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). Modulo bias is irrelevant at our bounds (< 2^32).
    std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }

    int range(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    bool coin() { return (next() & 1) != 0; }

    // Random rational k/den with k in [lo_num, hi_num].
    Rational rational(int lo_num, int hi_num, int den) {
        return Rational(range(lo_num, hi_num), den);
    }

private:
    std::uint64_t state_;
};

}  // namespace fuzzdyn
