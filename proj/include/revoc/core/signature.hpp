#pragma once

#include <array>
#include <string_view>

#include "revoc/core/bytes.hpp"

namespace revoc {

/// Name recorded in output metadata; the scheme is fixed per build.
inline constexpr std::string_view kSignatureScheme = "ed25519";

using PublicKey = std::array<std::uint8_t, 32>;
using Signature = std::array<std::uint8_t, 64>;

/// Deterministic Ed25519 signing key. The secret is wiped on destruction.
class SigningKey {
public:
    static SigningKey from_seed(const Digest& seed);

    SigningKey(const SigningKey& other);
    SigningKey& operator=(const SigningKey& other);
    ~SigningKey();

    const PublicKey& public_key() const { return public_; }
    Signature sign(ByteView message) const;

private:
    SigningKey() = default;

    std::array<std::uint8_t, 64> secret_{};
    PublicKey public_{};
};

bool verify_detached(const PublicKey& key, ByteView message, const Signature& sig);

}  // namespace revoc
