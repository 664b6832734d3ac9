#pragma once

#include <cstdint>

namespace fpnet {

// Deterministic uniform source (splitmix64) so seeded results do not depend
// on standard-library distribution implementations.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ULL) {
        next_u64(); // warm up past small seeds
        next_u64();
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // in (0, 1)
    double next_open_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // in [lo, hi)
    double next_in(double lo, double hi) { return lo + next_unit() * (hi - lo); }

    // in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

private:
    std::uint64_t state_;
};

} // namespace fpnet
