#pragma once
// Deterministic seeded generator (splitmix64). All randomness in the toolkit
// flows through this so that reports are reproducible bit-for-bit across
// platforms; draws are dyadic rationals, exact in any binary float format.

#include <cstdint>

namespace skt {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform multiple of 2^-30 in [-1, 1)
    double uniform_pm1() {
        long long k = static_cast<long long>(next_u64() >> 33) - (1LL << 30);
        return static_cast<double>(k) / static_cast<double>(1LL << 30);
    }

    // uniform multiple of 2^-30 in [lo, hi) (lo, hi small doubles)
    double uniform(double lo, double hi) { return lo + (uniform_pm1() + 1.0) * 0.5 * (hi - lo); }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  private:
    std::uint64_t state_;
};

// independent stream for a named subtask of a master seed
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
    Rng r(seed ^ (0xd1b54a32d192ed03ULL * (tag + 1)));
    return r.next_u64();
}

}  // namespace skt
