#pragma once

#include <cstdint>
#include <random>

namespace lsikit {

// Seeded generator with library-independent draws (std distributions are
// implementation-defined, which would break cross-toolchain determinism).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    // Uniform in (0, 1].
    double uniform_open_closed() { return 1.0 - uniform(); }
    // Uniform integer in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }
    // Standard normal via Box-Muller.
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace lsikit
