#pragma once

// RSA dynamic accumulator (positive, additive and subtractive).
//
//   value = g ^ (product of member primes) mod n
//
// Membership of an item x with prime p is shown by a witness w with
// w^p = value (mod n). Every update is appended to a delta log so holders can
// bring their witnesses forward without the trapdoor.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "revoc/accumulators/hash_to_prime.hpp"
#include "revoc/core/bytes.hpp"
#include "revoc/core/credential.hpp"

namespace revoc {

enum class CryptoProfile : std::uint8_t {
    Toy,   // 512-bit modulus for exhaustive tests
    Full,  // 2048-bit modulus for realistic sizes
};

std::string_view to_string(CryptoProfile p);
CryptoProfile parse_profile(std::string_view text);
unsigned modulus_bits(CryptoProfile p);

struct RsaTrapdoor {
    mpz_class p;
    mpz_class q;
    mpz_class phi() const { return (p - 1) * (q - 1); }
};

struct RsaParams {
    mpz_class modulus;
    mpz_class generator;  // a quadratic residue mod n
    std::size_t modulus_bytes = 0;
    std::optional<RsaTrapdoor> trapdoor;

    /// Public part only.
    RsaParams public_view() const { return {modulus, generator, modulus_bytes, std::nullopt}; }
};

/// Deterministically derives an RSA modulus of the given size from a seed.
RsaParams generate_rsa_params(unsigned bits, std::uint64_t seed);

/// Process-wide cached parameters for a profile (fixed parameter seed).
const RsaParams& rsa_params_for(CryptoProfile profile);

struct AccumulatorDelta {
    enum class Kind : std::uint8_t { Add = 'A', Delete = 'D' };

    Kind kind = Kind::Add;
    mpz_class prime;
    mpz_class value_after;

    /// Adds carry only the prime; deletions also carry the new value, which
    /// a holder needs for the Bezout update.
    Bytes serialize(std::size_t modulus_bytes) const;
    static AccumulatorDelta parse(ByteView data);
};

struct RsaWitness {
    mpz_class value;
    mpz_class prime;
    std::uint64_t version = 0;  // accumulator version the witness matches
    LogicalTime as_of;          // epoch of the last sync

    Bytes serialize(std::size_t modulus_bytes) const;
    static RsaWitness parse(ByteView data);
};

class RsaAccumulator {
public:
    explicit RsaAccumulator(RsaParams params, bool use_trapdoor = false);

    /// Adds an item and returns its witness (the pre-add value).
    /// Throws AlreadyMember if the item, or an item with the same prime, is present.
    RsaWitness add(ByteView item, LogicalTime now);

    /// Removes an item. Throws NotMember.
    void remove(ByteView item, LogicalTime now);

    bool contains(ByteView item) const { return members_.contains(Bytes(item.begin(), item.end())); }
    std::size_t member_count() const { return members_.size(); }

    const mpz_class& value() const { return value_; }
    const RsaParams& params() const { return params_; }
    std::uint64_t version() const { return log_.size(); }

    std::span<const AccumulatorDelta> deltas_since(std::uint64_t version) const;

    /// g^(product of all member primes), from scratch.
    mpz_class recompute_value() const;
    /// g^(product of all other member primes), from scratch. Throws NotMember.
    RsaWitness witness_for(ByteView item, LogicalTime now) const;

    const mpz_class& prime_of(ByteView item) { return primes_.prime_for(item); }

    /// Canonical encoding of the issuer-side state, used for storage accounting.
    Bytes serialize_state() const;

private:
    RsaParams params_;
    bool use_trapdoor_;
    mpz_class value_;
    std::map<Bytes, mpz_class> members_;
    std::set<mpz_class> member_primes_;
    std::vector<AccumulatorDelta> log_;
    PrimeCache primes_;
};

/// Brings a witness forward over an ordered slice of the delta log.
/// Throws MemberRevoked if the witness's own prime was deleted.
RsaWitness rsa_update_witness(RsaWitness witness, std::span<const AccumulatorDelta> deltas,
                              const RsaParams& params, LogicalTime now);

bool rsa_verify_membership(const mpz_class& witness, const mpz_class& prime, const mpz_class& acc_value,
                           const mpz_class& modulus);
bool rsa_verify_membership(const mpz_class& witness, ByteView item, const mpz_class& acc_value,
                           const mpz_class& modulus);

}  // namespace revoc
