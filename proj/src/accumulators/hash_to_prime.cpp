#include "revoc/accumulators/hash_to_prime.hpp"

#include "revoc/accumulators/bigint.hpp"
#include "revoc/core/hash.hpp"
#include "revoc/core/op_counters.hpp"

namespace revoc {

mpz_class hash_to_prime(ByteView item) {
    ++op_counters().prime_searches;
    auto digest = tagged_hash("hash-to-prime", {item});
    mpz_class candidate = from_bytes(digest);
    mpz_setbit(candidate.get_mpz_t(), 255);
    mpz_setbit(candidate.get_mpz_t(), 0);
    mpz_class prime;
    if (mpz_probab_prime_p(candidate.get_mpz_t(), 30) > 0) {
        return candidate;
    }
    mpz_nextprime(prime.get_mpz_t(), candidate.get_mpz_t());
    return prime;
}

const mpz_class& PrimeCache::prime_for(ByteView item) {
    Bytes key(item.begin(), item.end());
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        it = cache_.emplace(std::move(key), hash_to_prime(item)).first;
    }
    return it->second;
}

}  // namespace revoc
