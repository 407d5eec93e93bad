#pragma once

#include "gcert/uint128.hpp"

#include <cstdint>
#include <random>

namespace gcert {

/// mt19937_64 with hand-written sampling, so streams are identical on every
/// standard library (std distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    u128 next128()
    {
        u128 hi = engine_();
        return (hi << 64) | engine_();
    }

    /// Uniform in [0, bound); bound > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t bound)
    {
        // 2^64 mod bound: values below it would over-represent small residues.
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t v = engine_();
            if (v >= threshold)
                return v % bound;
        }
    }

    /// Uniform in [0, last].
    u128 up_to(u128 last)
    {
        if (last == u128_max)
            return next128();
        u128 bound = last + 1;
        if (bound <= ~std::uint64_t{0})
            return below(static_cast<std::uint64_t>(bound));
        u128 threshold = (0 - bound) % bound;
        for (;;) {
            u128 v = next128();
            if (v >= threshold)
                return v % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace gcert
