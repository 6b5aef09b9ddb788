#include "revoc/core/credential.hpp"

#include "revoc/core/errors.hpp"
#include "revoc/core/hash.hpp"
#include "revoc/core/serialization.hpp"

namespace revoc {
namespace {

Bytes encode_claims(const ClaimMap& claims) {
    Bytes out;
    put_u32_be(out, static_cast<std::uint32_t>(claims.size()));
    Writer w;
    for (const auto& [key, value] : claims) {
        w.field(key).field(value);
    }
    append(out, w.bytes());
    return out;
}

ClaimMap decode_claims(ByteView data) {
    Reader r(data);
    auto count = get_u64_be(r.raw(4));
    ClaimMap claims;
    for (std::uint64_t i = 0; i < count; ++i) {
        auto key = r.string_field();
        auto value = r.string_field();
        claims.emplace(std::move(key), std::move(value));
    }
    r.expect_done();
    return claims;
}

Writer credential_body(const Credential& vc) {
    Writer w;
    w.tag(kCredentialTag)
        .field(vc.id.view())
        .field(vc.holder_id.view())
        .field(vc.issuer_id.view())
        .field(encode_claims(vc.claims))
        .u64(vc.issued_at.epoch);
    return w;
}

Writer lvvc_body(const LinkedValidityCredential& lvvc) {
    Writer w;
    w.tag(kLvvcTag)
        .field(lvvc.linked_credential_id.view())
        .field(lvvc.issuer_id.view())
        .u64(lvvc.issued_at.epoch);
    return w;
}

}  // namespace

std::string_view to_string(IdMode mode) {
    return mode == IdMode::Stable ? "stable" : "pairwise";
}

IdMode parse_id_mode(std::string_view text) {
    if (text == "stable") return IdMode::Stable;
    if (text == "pairwise") return IdMode::Pairwise;
    throw Error(ErrorCode::ConfigError, "unknown id mode '" + std::string(text) + "'");
}

Bytes Credential::signing_payload() const {
    return std::move(credential_body(*this)).take();
}

Bytes Credential::serialize() const {
    auto w = credential_body(*this);
    w.field(signature);
    return std::move(w).take();
}

Credential Credential::parse(ByteView data) {
    Reader r(data);
    r.expect_tag(kCredentialTag);
    Credential vc;
    vc.id = CredentialId::from(r.field());
    vc.holder_id = HolderId::from(r.field());
    vc.issuer_id = IssuerId::from(r.field());
    vc.claims = decode_claims(r.field());
    vc.issued_at = LogicalTime{r.u64()};
    vc.signature = r.fixed_field<64>();
    r.expect_done();
    return vc;
}

Bytes LinkedValidityCredential::signing_payload() const {
    return std::move(lvvc_body(*this)).take();
}

Bytes LinkedValidityCredential::serialize() const {
    auto w = lvvc_body(*this);
    w.field(signature);
    return std::move(w).take();
}

LinkedValidityCredential LinkedValidityCredential::parse(ByteView data) {
    Reader r(data);
    r.expect_tag(kLvvcTag);
    LinkedValidityCredential lvvc;
    lvvc.linked_credential_id = CredentialId::from(r.field());
    lvvc.issuer_id = IssuerId::from(r.field());
    lvvc.issued_at = LogicalTime{r.u64()};
    lvvc.signature = r.fixed_field<64>();
    r.expect_done();
    return lvvc;
}

Issuer Issuer::from_seed(const Digest& seed) {
    auto key = SigningKey::from_seed(seed);
    auto id = IssuerId::from(tagged_hash("issuer-id", {key.public_key()}));
    return Issuer(id, std::move(key));
}

CredentialId Issuer::next_credential_id() {
    Bytes counter;
    put_u64_be(counter, counter_++);
    return CredentialId::from(tagged_hash("credential-id", {id_.view(), counter}));
}

void KeyRegistry::register_issuer(const IssuerId& id, const PublicKey& key) {
    auto [it, inserted] = keys_.emplace(id, key);
    if (!inserted && it->second != key) {
        throw Error(ErrorCode::ConfigError, "issuer already registered with a different key");
    }
}

const PublicKey& KeyRegistry::lookup(const IssuerId& id) const {
    auto it = keys_.find(id);
    if (it == keys_.end()) {
        throw Error(ErrorCode::UnknownIssuer, "issuer " + id.hex().substr(0, 16) + " not registered");
    }
    return it->second;
}

Credential issue_credential(Issuer& issuer, const HolderId& holder, ClaimMap claims, LogicalTime now) {
    Credential vc;
    vc.id = issuer.next_credential_id();
    vc.holder_id = holder;
    vc.issuer_id = issuer.id();
    vc.claims = std::move(claims);
    vc.issued_at = now;
    vc.signature = issuer.key().sign(vc.signing_payload());
    return vc;
}

Credential reissue_credential(const Issuer& issuer, const Credential& original, LogicalTime now) {
    Credential vc = original;
    vc.issued_at = now;
    vc.signature = issuer.key().sign(vc.signing_payload());
    return vc;
}

LinkedValidityCredential issue_lvvc(const Issuer& issuer, const CredentialId& credential_id, LogicalTime now) {
    LinkedValidityCredential lvvc;
    lvvc.linked_credential_id = credential_id;
    lvvc.issuer_id = issuer.id();
    lvvc.issued_at = now;
    lvvc.signature = issuer.key().sign(lvvc.signing_payload());
    return lvvc;
}

bool verify_signature(const Credential& vc, const KeyRegistry& registry) {
    return verify_detached(registry.lookup(vc.issuer_id), vc.signing_payload(), vc.signature);
}

bool verify_signature(const LinkedValidityCredential& lvvc, const KeyRegistry& registry) {
    return verify_detached(registry.lookup(lvvc.issuer_id), lvvc.signing_payload(), lvvc.signature);
}

bool check_link(const Credential& vc, const LinkedValidityCredential& lvvc) {
    return lvvc.linked_credential_id == vc.id && lvvc.issuer_id == vc.issuer_id;
}

bool check_freshness(LogicalTime issued_at, LogicalTime now, std::uint64_t max_age) {
    if (issued_at > now) {
        return false;
    }
    return now.epoch - issued_at.epoch <= max_age;
}

Digest pairwise_alias(const Digest& holder_secret, const CredentialId& id, ByteView nonce) {
    return hmac_sha256(holder_secret, concat({as_bytes("pairwise-alias"), id.view(), nonce}));
}

}  // namespace revoc
