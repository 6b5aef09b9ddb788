#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "revoc/core/bytes.hpp"

namespace revoc {

/// Seeded generator with platform-stable output. Only the raw engine is used;
/// standard distributions are implementation-defined and are avoided.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    bool chance(std::uint64_t numerator, std::uint64_t denominator) {
        return below(denominator) < numerator;
    }

    Digest digest();

private:
    std::mt19937_64 engine_;
};

/// Derives an independent 32-byte seed from a scenario seed and a label.
Digest derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

}  // namespace revoc
