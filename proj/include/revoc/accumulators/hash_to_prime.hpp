#pragma once

#include <map>

#include <gmpxx.h>

#include "revoc/core/bytes.hpp"

namespace revoc {

/// Deterministic item -> prime map: SHA-256 of the item, forced to 256 bits
/// and odd, then the next probable prime at or above it.
mpz_class hash_to_prime(ByteView item);

/// Memoising wrapper; the prime search dominates accumulator cost.
class PrimeCache {
public:
    const mpz_class& prime_for(ByteView item);
    std::size_t size() const { return cache_.size(); }

private:
    std::map<Bytes, mpz_class> cache_;
};

}  // namespace revoc
