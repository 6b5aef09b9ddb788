#include "revoc/core/signature.hpp"

#include <sodium.h>

#include "revoc/core/op_counters.hpp"
#include "sodium_init.hpp"

namespace revoc {

using detail::ensure_sodium;

SigningKey SigningKey::from_seed(const Digest& seed) {
    ensure_sodium();
    SigningKey key;
    crypto_sign_seed_keypair(key.public_.data(), key.secret_.data(), seed.data());
    return key;
}

SigningKey::SigningKey(const SigningKey& other) : secret_(other.secret_), public_(other.public_) {}

SigningKey& SigningKey::operator=(const SigningKey& other) {
    secret_ = other.secret_;
    public_ = other.public_;
    return *this;
}

SigningKey::~SigningKey() {
    sodium_memzero(secret_.data(), secret_.size());
}

Signature SigningKey::sign(ByteView message) const {
    ++op_counters().signatures;
    Signature sig{};
    crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_.data());
    return sig;
}

bool verify_detached(const PublicKey& key, ByteView message, const Signature& sig) {
    ensure_sodium();
    ++op_counters().signature_checks;
    return crypto_sign_verify_detached(sig.data(), message.data(), message.size(), key.data()) == 0;
}

}  // namespace revoc
