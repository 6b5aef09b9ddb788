#include "revoc/accumulators/rsa_accumulator.hpp"

#include <mutex>

#include "revoc/accumulators/bigint.hpp"
#include "revoc/core/errors.hpp"
#include "revoc/core/hash.hpp"
#include "revoc/core/serialization.hpp"

namespace revoc {
namespace {

constexpr std::uint64_t kProfileParameterSeed = 0x5eed'0f'acc0;

mpz_class expand_to_bits(std::uint64_t seed, std::string_view label, unsigned bits) {
    Bytes stream;
    for (std::uint64_t block = 0; stream.size() * 8 < bits; ++block) {
        Bytes in;
        put_u64_be(in, seed);
        put_u64_be(in, block);
        append(stream, tagged_hash(label, {in}));
    }
    stream.resize((bits + 7) / 8);
    return from_bytes(stream);
}

mpz_class prime_with_bits(std::uint64_t seed, std::string_view label, unsigned bits) {
    mpz_class candidate = expand_to_bits(seed, label, bits);
    // Top two bits set so that the product of two such primes has exactly 2*bits bits.
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    mpz_class prime;
    mpz_nextprime(prime.get_mpz_t(), candidate.get_mpz_t());
    return prime;
}

}  // namespace

std::string_view to_string(CryptoProfile p) {
    return p == CryptoProfile::Toy ? "toy" : "full";
}

CryptoProfile parse_profile(std::string_view text) {
    if (text == "toy") return CryptoProfile::Toy;
    if (text == "full") return CryptoProfile::Full;
    throw Error(ErrorCode::ConfigError, "unknown crypto profile '" + std::string(text) + "'");
}

unsigned modulus_bits(CryptoProfile p) {
    return p == CryptoProfile::Toy ? 512 : 2048;
}

RsaParams generate_rsa_params(unsigned bits, std::uint64_t seed) {
    if (bits < 64 || bits % 16 != 0) {
        throw Error(ErrorCode::ConfigError, "modulus size must be a multiple of 16 and at least 64 bits");
    }
    const unsigned half = bits / 2;
    mpz_class p = prime_with_bits(seed, "rsa-prime-p", half);
    mpz_class q = prime_with_bits(seed, "rsa-prime-q", half);
    for (std::uint64_t bump = 1; p == q; ++bump) {
        q = prime_with_bits(seed + bump, "rsa-prime-q", half);
    }
    RsaParams params;
    params.modulus = p * q;
    params.modulus_bytes = bits / 8;
    params.trapdoor = RsaTrapdoor{p, q};

    for (std::uint64_t attempt = 0;; ++attempt) {
        mpz_class h = expand_to_bits(seed + attempt, "rsa-generator", bits) % params.modulus;
        mpz_class g = h * h % params.modulus;
        mpz_class common;
        mpz_gcd(common.get_mpz_t(), h.get_mpz_t(), params.modulus.get_mpz_t());
        if (g > 1 && common == 1) {
            params.generator = g;
            break;
        }
    }
    return params;
}

const RsaParams& rsa_params_for(CryptoProfile profile) {
    static std::once_flag toy_once, full_once;
    static RsaParams toy, full;
    if (profile == CryptoProfile::Toy) {
        std::call_once(toy_once, [] { toy = generate_rsa_params(512, kProfileParameterSeed); });
        return toy;
    }
    std::call_once(full_once, [] { full = generate_rsa_params(2048, kProfileParameterSeed); });
    return full;
}

Bytes AccumulatorDelta::serialize(std::size_t modulus_bytes) const {
    Writer w;
    w.tag(static_cast<std::uint8_t>(kind)).field(to_bytes(prime));
    if (kind == Kind::Delete) {
        w.field(to_fixed_bytes(value_after, modulus_bytes));
    }
    return std::move(w).take();
}

AccumulatorDelta AccumulatorDelta::parse(ByteView data) {
    Reader r(data);
    AccumulatorDelta d;
    auto tag = r.tag();
    if (tag != static_cast<std::uint8_t>(Kind::Add) && tag != static_cast<std::uint8_t>(Kind::Delete)) {
        throw Error(ErrorCode::Malformed, "unknown accumulator delta kind");
    }
    d.kind = static_cast<Kind>(tag);
    d.prime = from_bytes(r.field());
    if (d.kind == Kind::Delete) {
        d.value_after = from_bytes(r.field());
    }
    r.expect_done();
    return d;
}

Bytes RsaWitness::serialize(std::size_t modulus_bytes) const {
    Writer w;
    w.tag('W').u64(version).u64(as_of.epoch).field(to_bytes(prime)).field(to_fixed_bytes(value, modulus_bytes));
    return std::move(w).take();
}

RsaWitness RsaWitness::parse(ByteView data) {
    Reader r(data);
    r.expect_tag('W');
    RsaWitness w;
    w.version = r.u64();
    w.as_of = LogicalTime{r.u64()};
    w.prime = from_bytes(r.field());
    w.value = from_bytes(r.field());
    r.expect_done();
    return w;
}

RsaAccumulator::RsaAccumulator(RsaParams params, bool use_trapdoor)
    : params_(std::move(params)), use_trapdoor_(use_trapdoor), value_(params_.generator) {
    if (use_trapdoor_ && !params_.trapdoor) {
        throw Error(ErrorCode::ConfigError, "trapdoor deletion requested without the factorisation");
    }
}

RsaWitness RsaAccumulator::add(ByteView item, LogicalTime now) {
    Bytes key(item.begin(), item.end());
    if (members_.contains(key)) {
        throw Error(ErrorCode::AlreadyMember, "item already accumulated");
    }
    const mpz_class prime = primes_.prime_for(item);
    if (member_primes_.contains(prime)) {
        throw Error(ErrorCode::AlreadyMember, "another member maps to the same prime");
    }
    RsaWitness witness{value_, prime, version() + 1, now};
    value_ = powm(value_, prime, params_.modulus);
    members_.emplace(std::move(key), prime);
    member_primes_.insert(prime);
    log_.push_back({AccumulatorDelta::Kind::Add, prime, value_});
    return witness;
}

void RsaAccumulator::remove(ByteView item, LogicalTime) {
    auto it = members_.find(Bytes(item.begin(), item.end()));
    if (it == members_.end()) {
        throw Error(ErrorCode::NotMember, "item is not accumulated");
    }
    const mpz_class prime = it->second;
    members_.erase(it);
    member_primes_.erase(prime);
    if (use_trapdoor_) {
        mpz_class inverse;
        mpz_class phi = params_.trapdoor->phi();
        mpz_invert(inverse.get_mpz_t(), prime.get_mpz_t(), phi.get_mpz_t());
        value_ = powm(value_, inverse, params_.modulus);
    } else {
        value_ = recompute_value();
    }
    log_.push_back({AccumulatorDelta::Kind::Delete, prime, value_});
}

std::span<const AccumulatorDelta> RsaAccumulator::deltas_since(std::uint64_t v) const {
    if (v > log_.size()) {
        throw Error(ErrorCode::OutOfRange, "witness version is ahead of the accumulator");
    }
    return std::span<const AccumulatorDelta>(log_).subspan(v);
}

mpz_class RsaAccumulator::recompute_value() const {
    std::vector<mpz_class> primes(member_primes_.begin(), member_primes_.end());
    return powm(params_.generator, product(std::move(primes)), params_.modulus);
}

RsaWitness RsaAccumulator::witness_for(ByteView item, LogicalTime now) const {
    auto it = members_.find(Bytes(item.begin(), item.end()));
    if (it == members_.end()) {
        throw Error(ErrorCode::NotMember, "item is not accumulated");
    }
    std::vector<mpz_class> others;
    others.reserve(member_primes_.size());
    for (const auto& p : member_primes_) {
        if (p != it->second) {
            others.push_back(p);
        }
    }
    return {powm(params_.generator, product(std::move(others)), params_.modulus), it->second, version(), now};
}

Bytes RsaAccumulator::serialize_state() const {
    Writer w;
    w.tag('R')
        .field(to_fixed_bytes(params_.modulus, params_.modulus_bytes))
        .field(to_fixed_bytes(params_.generator, params_.modulus_bytes))
        .field(to_fixed_bytes(value_, params_.modulus_bytes))
        .u64(members_.size());
    for (const auto& [item, prime] : members_) {
        w.field(item).field(to_bytes(prime));
    }
    w.u64(log_.size());
    for (const auto& d : log_) {
        w.field(d.serialize(params_.modulus_bytes));
    }
    return std::move(w).take();
}

RsaWitness rsa_update_witness(RsaWitness witness, std::span<const AccumulatorDelta> deltas, const RsaParams& params,
                              LogicalTime now) {
    for (const auto& d : deltas) {
        if (d.kind == AccumulatorDelta::Kind::Add) {
            witness.value = powm(witness.value, d.prime, params.modulus);
        } else {
            if (d.prime == witness.prime) {
                throw Error(ErrorCode::MemberRevoked, "the witnessed item was removed");
            }
            // a*p + b*q = 1  =>  (w^b * A'^a)^p = A'^(q*b + p*a) = A'
            mpz_class g, a, b;
            mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), witness.prime.get_mpz_t(), d.prime.get_mpz_t());
            if (g != 1) {
                throw Error(ErrorCode::Malformed, "deleted prime shares a factor with the witnessed prime");
            }
            witness.value = powm(witness.value, b, params.modulus) * powm(d.value_after, a, params.modulus) %
                            params.modulus;
        }
    }
    witness.version += deltas.size();
    witness.as_of = now;
    return witness;
}

bool rsa_verify_membership(const mpz_class& witness, const mpz_class& prime, const mpz_class& acc_value,
                           const mpz_class& modulus) {
    if (witness <= 0 || witness >= modulus) {
        return false;
    }
    return powm(witness, prime, modulus) == acc_value;
}

bool rsa_verify_membership(const mpz_class& witness, ByteView item, const mpz_class& acc_value,
                           const mpz_class& modulus) {
    return rsa_verify_membership(witness, hash_to_prime(item), acc_value, modulus);
}

}  // namespace revoc
