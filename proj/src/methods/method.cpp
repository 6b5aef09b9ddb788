#include "revoc/methods/method.hpp"

#include <array>

#include "methods/factories.hpp"
#include "revoc/core/errors.hpp"
#include "revoc/core/hash.hpp"

namespace revoc {
namespace {

constexpr RoleSet kI{true, false, false};
constexpr RoleSet kIH{true, true, false};
constexpr RoleSet kHV{false, true, true};
constexpr RoleSet kIHV{true, true, true};

constexpr InteractionPattern kListPattern{kI, kI, kIHV};
constexpr InteractionPattern kHolderPattern{kIH, kIH, kHV};

const std::array<MethodInfo, 8> kInfo{{
    {MethodKind::SimpleList, MethodGroup::ListBased, {UpdateProperty::Dynamic, ProofProperty::Negative},
     kListPattern, true, false, false, false, ScalingClass::Constant, "verification_status_bytes"},
    {MethodKind::HiddenList, MethodGroup::ListBasedHidden, {UpdateProperty::Dynamic, ProofProperty::Negative},
     kListPattern, true, false, true, false, ScalingClass::Constant, "verification_status_bytes"},
    {MethodKind::CompressedBitList, MethodGroup::CompressedList, {UpdateProperty::Dynamic, ProofProperty::Negative},
     kListPattern, true, false, false, false, ScalingClass::Linear, "verifier_snapshot_bytes"},
    {MethodKind::BloomList, MethodGroup::CompressedList, {UpdateProperty::Additive, ProofProperty::Negative},
     kListPattern, false, false, false, false, ScalingClass::Constant, "bloom_filter_bytes"},
    {MethodKind::RsaAccumulator, MethodGroup::CryptographicAccumulators,
     {UpdateProperty::Dynamic, ProofProperty::Positive}, kHolderPattern, false, false, true, false,
     ScalingClass::Linear, "mean_holder_sync_bytes"},
    {MethodKind::MerkleAccumulator, MethodGroup::CryptographicAccumulators,
     {UpdateProperty::Additive, ProofProperty::Positive}, kHolderPattern, false, false, true, false,
     ScalingClass::Sublinear, "mean_holder_sync_bytes"},
    {MethodKind::CredentialUpdate, MethodGroup::CredentialUpdate, {UpdateProperty::Dynamic, ProofProperty::Positive},
     kHolderPattern, false, true, true, true, ScalingClass::Constant, "refresh_payload_bytes"},
    {MethodKind::Lvvc, MethodGroup::Lvvc, {UpdateProperty::Dynamic, ProofProperty::Positive}, kHolderPattern, false,
     true, true, false, ScalingClass::Constant, "refresh_payload_bytes"},
}};

constexpr std::array<std::string_view, 8> kNames{"simple-list", "hidden-list", "bitlist",           "bloom-list",
                                                 "rsa",         "merkle",      "credential-update", "lvvc"};

Bytes epoch_bytes(LogicalTime t) {
    Bytes out;
    put_u64_be(out, t.epoch);
    return out;
}

}  // namespace

std::string_view to_string(MethodKind m) {
    return kNames.at(static_cast<std::size_t>(m));
}

MethodKind parse_method(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) {
            return static_cast<MethodKind>(i);
        }
    }
    throw Error(ErrorCode::ConfigError, "unknown method '" + std::string(name) + "'");
}

const std::vector<MethodKind>& all_methods() {
    static const std::vector<MethodKind> all{
        MethodKind::SimpleList,     MethodKind::HiddenList,        MethodKind::CompressedBitList,
        MethodKind::BloomList,      MethodKind::RsaAccumulator,    MethodKind::MerkleAccumulator,
        MethodKind::CredentialUpdate, MethodKind::Lvvc,
    };
    return all;
}

std::string_view to_string(MethodGroup g) {
    switch (g) {
        case MethodGroup::ListBased: return "List Based";
        case MethodGroup::ListBasedHidden: return "List Based Hidden";
        case MethodGroup::CompressedList: return "Compressed List";
        case MethodGroup::CryptographicAccumulators: return "Cryptographic Accumulators";
        case MethodGroup::CredentialUpdate: return "Credential Update";
        case MethodGroup::Lvvc: return "LVVC";
    }
    return "?";
}

const std::vector<MethodGroup>& all_groups() {
    static const std::vector<MethodGroup> all{
        MethodGroup::ListBased,        MethodGroup::ListBasedHidden, MethodGroup::CompressedList,
        MethodGroup::CryptographicAccumulators, MethodGroup::CredentialUpdate, MethodGroup::Lvvc,
    };
    return all;
}

std::vector<MethodKind> methods_in(MethodGroup g) {
    std::vector<MethodKind> out;
    for (auto m : all_methods()) {
        if (method_info(m).group == g) {
            out.push_back(m);
        }
    }
    return out;
}

std::string_view to_string(ScalingClass c) {
    switch (c) {
        case ScalingClass::Constant: return "constant";
        case ScalingClass::Sublinear: return "sublinear";
        case ScalingClass::Linear: return "linear";
        case ScalingClass::Superlinear: return "superlinear";
    }
    return "?";
}

std::string RoleSet::str() const {
    std::string out;
    out += issuer ? 'I' : ' ';
    out += ' ';
    out += holder ? 'H' : ' ';
    out += ' ';
    out += verifier ? 'V' : ' ';
    return out;
}

const MethodInfo& method_info(MethodKind m) {
    return kInfo.at(static_cast<std::size_t>(m));
}

std::string_view to_string(VerifyReason r) {
    switch (r) {
        case VerifyReason::Ok: return "ok";
        case VerifyReason::Malformed: return "malformed";
        case VerifyReason::BadSignature: return "bad_signature";
        case VerifyReason::BadBinding: return "bad_binding";
        case VerifyReason::Revoked: return "revoked";
        case VerifyReason::NotMember: return "not_member";
        case VerifyReason::Stale: return "stale";
        case VerifyReason::Link: return "link";
        case VerifyReason::AccessDenied: return "access_denied";
    }
    return "?";
}

Bytes Presentation::serialize() const {
    Writer w;
    w.tag('V').u64(static_cast<std::uint64_t>(method)).u64(epoch.epoch).field(nonce).field(clear).u64(sealed ? 1 : 0)
        .field(body);
    return std::move(w).take();
}

Presentation Presentation::parse(ByteView data) {
    Reader r(data);
    r.expect_tag('V');
    Presentation p;
    const auto m = r.u64();
    if (m >= kNames.size()) {
        throw Error(ErrorCode::Malformed, "unknown method tag");
    }
    p.method = static_cast<MethodKind>(m);
    p.epoch = LogicalTime{r.u64()};
    auto nonce = r.field();
    p.nonce.assign(nonce.begin(), nonce.end());
    auto clear = r.field();
    p.clear.assign(clear.begin(), clear.end());
    const auto sealed = r.u64();
    if (sealed > 1) {
        throw Error(ErrorCode::Malformed, "bad sealed flag");
    }
    p.sealed = sealed == 1;
    auto body = r.field();
    p.body.assign(body.begin(), body.end());
    r.expect_done();
    return p;
}

Bytes ProofBody::serialize() const {
    Writer w;
    w.tag('Q').field(credential).field(material).field(binding);
    return std::move(w).take();
}

ProofBody ProofBody::parse(ByteView data) {
    Reader r(data);
    r.expect_tag('Q');
    ProofBody b;
    auto c = r.field();
    b.credential.assign(c.begin(), c.end());
    auto m = r.field();
    b.material.assign(m.begin(), m.end());
    b.binding = r.fixed_field<64>();
    r.expect_done();
    return b;
}

Bytes Channel::call_issuer(Phase phase, Topic request_topic, ByteView request, Topic response_topic) {
    if (s_.issuer == nullptr) {
        throw Error(ErrorCode::ConfigError, "no issuer attached");
    }
    const LogicalTime t = now();
    const ActorRef caller = self_;
    IssuerAgent& issuer = *s_.issuer;
    return s_.net.call(self_, kIssuerRef, phase, request_topic, request, response_topic,
                       [&](ByteView r) { return issuer.handle(request_topic, r, caller, t); });
}

Bytes Channel::read_registry(Phase phase, const std::string& key, ByteView request) {
    Writer w;
    w.field(std::string_view(key)).raw(request);
    const Publication* pub = s_.board.find(key);
    return s_.net.call(self_, kRegistryRef, phase, Topic::RegistryRead, w.bytes(), Topic::RegistryResponse,
                       [&](ByteView) -> Bytes {
                           if (pub == nullptr) {
                               throw Error(ErrorCode::NotPresent, "nothing published under " + key);
                           }
                           return pub->answer(request);
                       });
}

void Channel::publish(Phase phase, ByteView wire) {
    s_.net.send(self_, kRegistryRef, phase, Topic::Publication, wire);
}

void Channel::send(ActorRef to, Phase phase, Topic topic, ByteView payload) {
    s_.net.send(self_, to, phase, topic, payload);
}

void Channel::note_local(Phase phase, Topic topic) {
    s_.net.note_local(self_, phase, topic);
}

IssueResult IssuerAgent::issue(const HolderId& holder, ClaimMap claims, Channel& ch) {
    const std::uint64_t ordinal = identity_.issued_count();
    for (auto& [k, v] : extra_claims(ordinal)) {
        claims[k] = v;
    }
    IssueResult result{issue_credential(identity_, holder, std::move(claims), ch.now()), std::nullopt};
    Entry e{ordinal, holder, false, false};
    entries_.emplace(result.credential.id, e);
    ch.note_local(Phase::Issuance, Topic::LocalUpdate);
    result.artifact = on_issue(result.credential, e, ch);
    return result;
}

void IssuerAgent::revoke(const CredentialId& id, Channel& ch) {
    auto it = entries_.find(id);
    if (it == entries_.end()) {
        throw Error(ErrorCode::NotMember, "unknown credential");
    }
    if (it->second.revoke_pending || it->second.revoked) {
        return;
    }
    it->second.revoke_pending = true;
    pending_.push_back(id);
    ch.note_local(Phase::Revocation, Topic::LocalUpdate);
}

void IssuerAgent::publish(Channel& ch) {
    if (pending_.empty()) {
        return;
    }
    for (const auto& id : pending_) {
        auto& e = entries_.at(id);
        e.revoke_pending = false;
        e.revoked = true;
    }
    auto newly = std::move(pending_);
    pending_.clear();
    on_publish(newly, ch);
}

Bytes IssuerAgent::handle(Topic topic, ByteView, ActorRef, LogicalTime) {
    throw Error(ErrorCode::Malformed, "issuer does not serve " + std::string(to_string(topic)));
}

bool IssuerAgent::is_revoked(const CredentialId& id) const {
    auto it = entries_.find(id);
    return it != entries_.end() && it->second.revoked;
}

const IssuerAgent::Entry& IssuerAgent::entry(const CredentialId& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) {
        throw Error(ErrorCode::NotMember, "unknown credential");
    }
    return it->second;
}

void IssuerAgent::require_holder_signature(const CredentialId& id, ByteView message, ByteView signature) const {
    auto it = entries_.find(id);
    if (it == entries_.end() || signature.size() != 64) {
        throw Error(ErrorCode::Unauthorized, "request not signed by the credential holder");
    }
    PublicKey pk{};
    std::copy(it->second.holder.bytes.begin(), it->second.holder.bytes.end(), pk.begin());
    Signature sig{};
    std::copy(signature.begin(), signature.end(), sig.begin());
    if (!verify_detached(pk, message, sig)) {
        throw Error(ErrorCode::Unauthorized, "request not signed by the credential holder");
    }
}

Digest IssuerAgent::credential_secret(std::string_view label, const CredentialId& id) const {
    // Ed25519 signatures are deterministic, so signing doubles as a keyed PRF.
    const auto sig = identity_.key().sign(tagged_hash("issuer-secret", {as_bytes(label), id.view()}));
    return sha256(sig);
}

Bytes IssuerAgent::serialize_state() const {
    Writer w;
    w.tag('I').field(identity_.id().view()).u64(identity_.issued_count()).u64(entries_.size());
    for (const auto& [id, e] : entries_) {
        const std::uint8_t flags = static_cast<std::uint8_t>((e.revoke_pending ? 1 : 0) | (e.revoked ? 2 : 0));
        w.raw(id.view()).raw_u64(e.ordinal).raw(e.holder.view()).raw(ByteView(&flags, 1));
    }
    w.u64(tx_log_.size());
    for (const auto& t : tx_log_) {
        const std::uint8_t role = static_cast<std::uint8_t>(t.caller.role);
        w.raw(ByteView(&role, 1)).raw_u64(t.caller.index).raw_u64(t.epoch);
        w.field(t.credential ? t.credential->view() : ByteView{});
    }
    append_state(w);
    return std::move(w).take();
}

Bytes holder_message(std::string_view label, std::initializer_list<ByteView> parts) {
    const auto d = tagged_hash(label, parts);
    return Bytes(d.begin(), d.end());
}

const Credential& HolderAgent::credential() const {
    if (!credential_) {
        throw Error(ErrorCode::Incomplete, "holder has no credential");
    }
    return *credential_;
}

void HolderAgent::accept(Credential vc, std::optional<Bytes> artifact) {
    credential_ = std::move(vc);
    on_accept(std::move(artifact));
}

Signature HolderAgent::sign(std::string_view label, std::initializer_list<ByteView> parts) const {
    return key_.sign(holder_message(label, parts));
}

Bytes HolderAgent::present(ByteView nonce, Channel& ch) {
    const Credential& vc = credential();
    Bytes extras = clear_extras(nonce, ch);
    ProofBody body;
    body.material = material(nonce, ch);
    body.credential = credential_->serialize();
    const auto now = epoch_bytes(ch.now());
    body.binding = sign("presentation", {nonce, now, sha256(body.credential), sha256(body.material), sha256(extras)});

    Presentation p;
    p.method = method_;
    p.epoch = ch.now();
    p.nonce.assign(nonce.begin(), nonce.end());
    if (params_.id_mode == IdMode::Pairwise && method_info(method_).pairwise_capable) {
        const auto alias = pairwise_alias(secret_, vc.id, nonce);
        p.clear.assign(alias.begin(), alias.end());
        append(p.clear, extras);
        p.sealed = true;
        p.body = ch.sealer().seal(nonce, body.serialize());
    } else {
        p.clear = std::move(extras);
        p.body = body.serialize();
    }
    return p.serialize();
}

Digest HolderAgent::artifact_digest() const {
    return sha256(artifact_bytes());
}

Bytes HolderAgent::serialize_state() const {
    Writer w;
    w.tag('H').field(key_.public_key()).field(credential_ ? credential_->serialize() : Bytes{}).field(artifact_bytes());
    return std::move(w).take();
}

std::optional<OpenedPresentation> VerifierAgent::open(ByteView presentation, ByteView nonce, bool check_epoch,
                                                      Channel& ch, VerifyReason& reason) const {
    OpenedPresentation out;
    ProofBody body;
    try {
        out.envelope = Presentation::parse(presentation);
        if (out.envelope.method != method_) {
            reason = VerifyReason::Malformed;
            return std::nullopt;
        }
        if (!std::equal(out.envelope.nonce.begin(), out.envelope.nonce.end(), nonce.begin(), nonce.end()) ||
            (check_epoch && out.envelope.epoch != ch.now())) {
            reason = VerifyReason::BadBinding;
            return std::nullopt;
        }
        Bytes plain;
        if (out.envelope.sealed) {
            if (!method_info(method_).pairwise_capable || out.envelope.clear.size() < 32) {
                reason = VerifyReason::Malformed;
                return std::nullopt;
            }
            auto opened = ch.sealer().open(nonce, out.envelope.body);
            if (!opened) {
                reason = VerifyReason::BadBinding;
                return std::nullopt;
            }
            plain = std::move(*opened);
            out.extras.assign(out.envelope.clear.begin() + 32, out.envelope.clear.end());
        } else {
            plain = out.envelope.body;
            out.extras = out.envelope.clear;
        }
        body = ProofBody::parse(plain);
        out.credential = Credential::parse(body.credential);
        out.material = body.material;
    } catch (const Error&) {
        reason = VerifyReason::Malformed;
        return std::nullopt;
    }

    try {
        if (!verify_signature(out.credential, ch.keys())) {
            reason = VerifyReason::BadSignature;
            return std::nullopt;
        }
    } catch (const Error&) {
        reason = VerifyReason::BadSignature;
        return std::nullopt;
    }
    PublicKey holder_key{};
    std::copy(out.credential.holder_id.bytes.begin(), out.credential.holder_id.bytes.end(), holder_key.begin());
    const auto epoch = epoch_bytes(out.envelope.epoch);
    const auto msg = holder_message(
        "presentation", {nonce, epoch, sha256(body.credential), sha256(body.material), sha256(out.extras)});
    if (!verify_detached(holder_key, msg, body.binding)) {
        reason = VerifyReason::BadBinding;
        return std::nullopt;
    }
    return out;
}

VerifyOutcome VerifierAgent::verify(ByteView presentation, ByteView nonce, Channel& ch) {
    retained_.push_back({Bytes(nonce.begin(), nonce.end()), Bytes(presentation.begin(), presentation.end())});
    VerifyOutcome out;
    auto opened = open(presentation, nonce, true, ch, out.reason);
    if (!opened) {
        return out;
    }
    try {
        const Status st = check_status(*opened, ch);
        out.valid = st.valid;
        out.reason = st.valid ? VerifyReason::Ok : st.reason;
        out.issuer_contacted = st.issuer_contacted;
        out.bytes_queried = st.bytes_queried;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::AccessDenied) {
            throw;
        }
        out.valid = false;
        out.reason = VerifyReason::AccessDenied;
        out.issuer_contacted = true;
    }
    return out;
}

std::optional<bool> VerifierAgent::recheck(std::size_t retained_index, Channel& ch) {
    const auto& r = retained_.at(retained_index);
    VerifyReason reason{};
    auto opened = open(r.presentation, r.nonce, false, ch, reason);
    if (!opened) {
        return false;
    }
    try {
        return check_status(*opened, ch).valid;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::AccessDenied) {
            return std::nullopt;
        }
        throw;
    }
}

Bytes VerifierAgent::serialize_state() const {
    Writer w;
    w.tag('W').u64(retained_.size());
    for (const auto& r : retained_) {
        w.field(r.nonce).field(r.presentation);
    }
    append_state(w);
    return std::move(w).take();
}

std::unique_ptr<IssuerAgent> make_issuer(MethodKind m, Issuer identity, const MethodParams& params) {
    switch (m) {
        case MethodKind::SimpleList: return detail::make_simple_list_issuer(std::move(identity), params);
        case MethodKind::HiddenList: return detail::make_hidden_list_issuer(std::move(identity), params);
        case MethodKind::CompressedBitList: return detail::make_bitlist_issuer(std::move(identity), params);
        case MethodKind::BloomList: return detail::make_bloom_issuer(std::move(identity), params);
        case MethodKind::RsaAccumulator: return detail::make_rsa_issuer(std::move(identity), params);
        case MethodKind::MerkleAccumulator: return detail::make_merkle_issuer(std::move(identity), params);
        case MethodKind::CredentialUpdate: return detail::make_update_issuer(std::move(identity), params);
        case MethodKind::Lvvc: return detail::make_lvvc_issuer(std::move(identity), params);
    }
    throw Error(ErrorCode::ConfigError, "unknown method");
}

std::unique_ptr<HolderAgent> make_holder(MethodKind m, SigningKey key, Digest secret, const MethodParams& params) {
    switch (m) {
        case MethodKind::SimpleList: return detail::make_simple_list_holder(std::move(key), secret, params);
        case MethodKind::HiddenList: return detail::make_hidden_list_holder(std::move(key), secret, params);
        case MethodKind::CompressedBitList: return detail::make_bitlist_holder(std::move(key), secret, params);
        case MethodKind::BloomList: return detail::make_bloom_holder(std::move(key), secret, params);
        case MethodKind::RsaAccumulator: return detail::make_rsa_holder(std::move(key), secret, params);
        case MethodKind::MerkleAccumulator: return detail::make_merkle_holder(std::move(key), secret, params);
        case MethodKind::CredentialUpdate: return detail::make_update_holder(std::move(key), secret, params);
        case MethodKind::Lvvc: return detail::make_lvvc_holder(std::move(key), secret, params);
    }
    throw Error(ErrorCode::ConfigError, "unknown method");
}

std::unique_ptr<VerifierAgent> make_verifier(MethodKind m, const MethodParams& params) {
    switch (m) {
        case MethodKind::SimpleList: return detail::make_simple_list_verifier(params);
        case MethodKind::HiddenList: return detail::make_hidden_list_verifier(params);
        case MethodKind::CompressedBitList: return detail::make_bitlist_verifier(params);
        case MethodKind::BloomList: return detail::make_bloom_verifier(params);
        case MethodKind::RsaAccumulator: return detail::make_rsa_verifier(params);
        case MethodKind::MerkleAccumulator: return detail::make_merkle_verifier(params);
        case MethodKind::CredentialUpdate: return detail::make_update_verifier(params);
        case MethodKind::Lvvc: return detail::make_lvvc_verifier(params);
    }
    throw Error(ErrorCode::ConfigError, "unknown method");
}

}  // namespace revoc
