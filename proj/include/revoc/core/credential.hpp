#pragma once

// Credential data model: verifiable credentials, linked validity credentials
// (LVVC), the issuer key registry and the logical clock.

#include <compare>
#include <cstdint>
#include <map>
#include <string>

#include "revoc/core/bytes.hpp"
#include "revoc/core/signature.hpp"

namespace revoc {

using CredentialId = Id32<struct CredentialIdTag>;
using IssuerId = Id32<struct IssuerIdTag>;
/// A holder is identified by its Ed25519 public key.
using HolderId = Id32<struct HolderIdTag>;

using ClaimMap = std::map<std::string, std::string>;

/// Logical epoch counter. Advanced only by the simulation harness.
struct LogicalTime {
    std::uint64_t epoch = 0;

    auto operator<=>(const LogicalTime&) const = default;
};

/// How a credential identifier appears in presentations.
enum class IdMode : std::uint8_t {
    Stable,    // the same identifier bytes in every presentation
    Pairwise,  // a fresh presentation-scoped alias only the holder can derive
};

std::string_view to_string(IdMode mode);
IdMode parse_id_mode(std::string_view text);

inline constexpr std::uint8_t kCredentialTag = 'C';
inline constexpr std::uint8_t kLvvcTag = 'L';

struct Credential {
    CredentialId id;
    HolderId holder_id;
    IssuerId issuer_id;
    ClaimMap claims;
    LogicalTime issued_at;
    Signature signature{};

    /// Canonical encoding of every field except the signature.
    Bytes signing_payload() const;
    Bytes serialize() const;
    static Credential parse(ByteView data);
};

/// Companion credential attesting that `linked_credential_id` was not revoked
/// at `issued_at`. Carries nothing about the holder.
struct LinkedValidityCredential {
    CredentialId linked_credential_id;
    IssuerId issuer_id;
    LogicalTime issued_at;
    Signature signature{};

    Bytes signing_payload() const;
    Bytes serialize() const;
    static LinkedValidityCredential parse(ByteView data);

    /// Encoded size; the same for every LVVC.
    static constexpr std::size_t kSerializedSize = 1 + (4 + 32) + (4 + 32) + (4 + 8) + (4 + 64);
};

/// Issuer identity: signing key plus the counter used for fresh credential ids.
class Issuer {
public:
    Issuer(IssuerId id, SigningKey key) : id_(id), key_(std::move(key)) {}

    static Issuer from_seed(const Digest& seed);

    const IssuerId& id() const { return id_; }
    const SigningKey& key() const { return key_; }
    std::uint64_t issued_count() const { return counter_; }

    CredentialId next_credential_id();

private:
    IssuerId id_;
    SigningKey key_;
    std::uint64_t counter_ = 0;
};

/// Stand-in for the PKI / DPKI trust layer: issuer id -> public key.
/// Append-only; re-registering an issuer with a different key is rejected.
class KeyRegistry {
public:
    void register_issuer(const IssuerId& id, const PublicKey& key);
    bool contains(const IssuerId& id) const { return keys_.contains(id); }
    const PublicKey& lookup(const IssuerId& id) const;
    std::size_t size() const { return keys_.size(); }

private:
    std::map<IssuerId, PublicKey> keys_;
};

Credential issue_credential(Issuer& issuer, const HolderId& holder, ClaimMap claims, LogicalTime now);

/// Re-signs an existing credential with a new issuance time (same id and claims).
Credential reissue_credential(const Issuer& issuer, const Credential& original, LogicalTime now);

LinkedValidityCredential issue_lvvc(const Issuer& issuer, const CredentialId& credential_id, LogicalTime now);

/// Throws Error(UnknownIssuer) if the issuer is not registered.
bool verify_signature(const Credential& vc, const KeyRegistry& registry);
bool verify_signature(const LinkedValidityCredential& lvvc, const KeyRegistry& registry);

bool check_link(const Credential& vc, const LinkedValidityCredential& lvvc);

/// True iff now - issued_at <= max_age. An LVVC from the future is rejected.
bool check_freshness(LogicalTime issued_at, LogicalTime now, std::uint64_t max_age);
inline bool check_freshness(const LinkedValidityCredential& lvvc, LogicalTime now, std::uint64_t max_age) {
    return check_freshness(lvvc.issued_at, now, max_age);
}

/// Keyed alias for a credential, fresh per presentation nonce.
Digest pairwise_alias(const Digest& holder_secret, const CredentialId& id, ByteView nonce);

}  // namespace revoc
