#include "revoc/core/rng.hpp"

#include <stdexcept>

#include "revoc/core/hash.hpp"
#include "revoc/core/serialization.hpp"

namespace revoc {

std::uint64_t DeterministicRng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("DeterministicRng::below: bound must be positive");
    }
    // Rejection sampling keeps the result unbiased and platform independent.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

Digest DeterministicRng::digest() {
    Digest out{};
    for (std::size_t i = 0; i < out.size(); i += 8) {
        auto v = engine_();
        for (std::size_t j = 0; j < 8; ++j) {
            out[i + j] = static_cast<std::uint8_t>(v >> (56 - 8 * j));
        }
    }
    return out;
}

Digest derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index) {
    Bytes buf;
    put_u64_be(buf, seed);
    put_u64_be(buf, index);
    return tagged_hash(label, {buf});
}

}  // namespace revoc
