#pragma once

#include <cstdint>
#include <stdexcept>

namespace qpv {

// Deterministic splittable generator (SplitMix64 core). Every stochastic
// operation in this library takes one of these explicitly; identical seeds
// produce identical draws on every platform, so whole runs are replayable.
// Parallel tasks must not share an instance -- derive one per task with
// split().
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 bits of precision. One draw.
    double uniform_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) {
            throw std::invalid_argument("Rng::uniform_below: bound must be positive");
        }
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    int bit() noexcept { return static_cast<int>(next_u64() >> 63); }

    // Derive an independent child stream; advances this stream by one draw.
    Rng split() noexcept { return Rng(next_u64()); }

private:
    std::uint64_t state_;
};

}  // namespace qpv
