// List-style methods: the verifier learns the status from a list the issuer
// maintains, either by asking the issuer or by fetching a compressed copy.

#include <charconv>
#include <set>

#include "methods/factories.hpp"
#include "revoc/accumulators/bloom_filter.hpp"
#include "revoc/accumulators/status_bit_array.hpp"
#include "revoc/core/errors.hpp"
#include "revoc/core/hash.hpp"

namespace revoc::detail {
namespace {

Bytes status_byte(bool revoked) {
    return Bytes{revoked ? kStatusRevoked : kStatusValid};
}

bool status_valid(ByteView response) {
    if (response.size() != 1 || response[0] > kStatusRevoked) {
        throw Error(ErrorCode::Malformed, "bad status response");
    }
    return response[0] == kStatusValid;
}

CredentialId id_from(ByteView bytes) {
    try {
        return CredentialId::from(bytes);
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::Malformed, "credential id must be 32 bytes");
    }
}

class PassiveHolder : public HolderAgent {
public:
    using HolderAgent::HolderAgent;

    SyncStatus sync(Channel&) override { return last_sync_ = SyncStatus::Skipped; }
    bool needs_sync(LogicalTime) const override { return false; }
};

// ---------------------------------------------------------------- simple list

class SimpleListIssuer : public IssuerAgent {
public:
    using IssuerAgent::IssuerAgent;

    Bytes handle(Topic topic, ByteView request, ActorRef caller, LogicalTime now) override {
        if (topic != Topic::StatusQuery) {
            return IssuerAgent::handle(topic, request, caller, now);
        }
        const auto id = id_from(request);
        log_transaction(caller, id, now);
        return status_byte(blocklist_.contains(id));
    }

protected:
    void on_publish(const std::vector<CredentialId>& newly, Channel& ch) override {
        blocklist_.insert(newly.begin(), newly.end());
        ch.note_local(Phase::Revocation, Topic::LocalUpdate);
    }

    void append_state(Writer& w) const override {
        w.u64(blocklist_.size());
        for (const auto& id : blocklist_) {
            w.raw(id.view());
        }
    }

private:
    std::set<CredentialId> blocklist_;
};

class SimpleListVerifier : public VerifierAgent {
public:
    explicit SimpleListVerifier(const MethodParams& p) : VerifierAgent(MethodKind::SimpleList, p) {}

    std::optional<bool> status_by_id(const CredentialId& id, Channel& ch) override {
        return status_valid(ch.call_issuer(Phase::Verification, Topic::StatusQuery, id.view(), Topic::StatusResponse));
    }

protected:
    Status check_status(const OpenedPresentation& p, Channel& ch) override {
        const auto resp =
            ch.call_issuer(Phase::Verification, Topic::StatusQuery, p.credential.id.view(), Topic::StatusResponse);
        const bool valid = status_valid(resp);
        return {valid, valid ? VerifyReason::Ok : VerifyReason::Revoked, true, resp.size()};
    }
};

// ---------------------------------------------------------------- hidden list

Digest hidden_commitment(const CredentialId& id, ByteView nonce) {
    return tagged_hash("hidden-commit", {id.view(), nonce});
}

class HiddenListIssuer : public IssuerAgent {
public:
    using IssuerAgent::IssuerAgent;

    Bytes handle(Topic topic, ByteView request, ActorRef caller, LogicalTime now) override {
        if (topic == Topic::TokenRequest) {
            return grant_token(request);
        }
        if (topic == Topic::StatusQuery) {
            return answer_query(request, caller, now);
        }
        return IssuerAgent::handle(topic, request, caller, now);
    }

protected:
    void on_publish(const std::vector<CredentialId>&, Channel& ch) override {
        ch.note_local(Phase::Revocation, Topic::LocalUpdate);
    }

    void append_state(Writer& w) const override {
        w.u64(tokens_.size());
        for (const auto& [token, grant] : tokens_) {
            const std::uint8_t once = grant.one_time ? 1 : 0;
            w.raw(token).raw(grant.id.view()).raw(ByteView(&once, 1));
        }
        w.u64(issued_tokens_);
    }

private:
    struct Grant {
        CredentialId id;
        bool one_time = false;
    };

    Bytes grant_token(ByteView request) {
        Reader r(request);
        const auto id = id_from(r.field());
        const auto nonce = r.field();
        const auto sig = r.field();
        r.expect_done();
        require_holder_signature(id, holder_message("token-request", {id.view(), nonce}), sig);

        Digest token{};
        if (params_.id_mode == IdMode::Pairwise) {
            Bytes counter;
            put_u64_be(counter, issued_tokens_);
            token = hmac_sha256(credential_secret("hidden-one-time", id), concat({nonce, counter}));
            tokens_[token] = {id, true};
        } else {
            token = credential_secret("hidden-stable", id);
            tokens_[token] = {id, false};
        }
        ++issued_tokens_;
        return Bytes(token.begin(), token.end());
    }

    Bytes answer_query(ByteView request, ActorRef caller, LogicalTime now) {
        Reader r(request);
        const auto token = r.field();
        const auto nonce = r.field();
        const auto commitment = r.field();
        r.expect_done();
        Digest key{};
        if (token.size() != key.size()) {
            throw Error(ErrorCode::AccessDenied, "missing access token");
        }
        std::copy(token.begin(), token.end(), key.begin());
        auto it = tokens_.find(key);
        if (it == tokens_.end()) {
            throw Error(ErrorCode::AccessDenied, "unknown or spent access token");
        }
        const auto expected = hidden_commitment(it->second.id, nonce);
        if (!std::equal(commitment.begin(), commitment.end(), expected.begin(), expected.end())) {
            throw Error(ErrorCode::AccessDenied, "token does not belong to this credential");
        }
        const CredentialId id = it->second.id;
        if (it->second.one_time) {
            tokens_.erase(it);
        }
        log_transaction(caller, id, now);
        return status_byte(is_revoked(id));
    }

    std::map<Digest, Grant> tokens_;
    std::uint64_t issued_tokens_ = 0;
};

class HiddenListHolder : public PassiveHolder {
public:
    using PassiveHolder::PassiveHolder;

protected:
    Bytes clear_extras(ByteView nonce, Channel& ch) override {
        const auto& id = credential().id;
        const auto sig = sign("token-request", {id.view(), nonce});
        Writer req;
        req.field(id.view()).field(nonce).field(sig);
        const auto token = ch.call_issuer(Phase::Verification, Topic::TokenRequest, req.bytes(), Topic::TokenResponse);
        Writer w;
        w.field(token).field(hidden_commitment(id, nonce));
        return std::move(w).take();
    }
};

class HiddenListVerifier : public VerifierAgent {
public:
    explicit HiddenListVerifier(const MethodParams& p) : VerifierAgent(MethodKind::HiddenList, p) {}

protected:
    Status check_status(const OpenedPresentation& p, Channel& ch) override {
        Bytes token;
        Bytes commitment;
        try {
            Reader r(p.extras);
            auto t = r.field();
            auto c = r.field();
            r.expect_done();
            token.assign(t.begin(), t.end());
            commitment.assign(c.begin(), c.end());
        } catch (const Error&) {
            return {false, VerifyReason::Malformed, false, 0};
        }
        const auto expected = hidden_commitment(p.credential.id, p.envelope.nonce);
        if (!std::equal(commitment.begin(), commitment.end(), expected.begin(), expected.end())) {
            return {false, VerifyReason::BadBinding, false, 0};
        }
        Writer q;
        q.field(token).field(p.envelope.nonce).field(commitment);
        const auto resp = ch.call_issuer(Phase::Verification, Topic::StatusQuery, q.bytes(), Topic::StatusResponse);
        const bool valid = status_valid(resp);
        return {valid, valid ? VerifyReason::Ok : VerifyReason::Revoked, true, resp.size()};
    }
};

// ------------------------------------------------------------------ bit list

constexpr std::string_view kStatusIndexClaim = "status_list_index";

std::optional<std::uint64_t> status_index(const Credential& vc) {
    auto it = vc.claims.find(std::string(kStatusIndexClaim));
    if (it == vc.claims.end()) {
        return std::nullopt;
    }
    std::uint64_t v = 0;
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

Bytes snapshot_request(const std::optional<std::uint64_t>& cached_epoch) {
    Writer w;
    w.u64(cached_epoch ? 1 : 0).u64(cached_epoch.value_or(0));
    return std::move(w).take();
}

std::optional<std::uint64_t> parse_snapshot_request(ByteView request) {
    Reader r(request);
    const auto has = r.u64();
    const auto epoch = r.u64();
    r.expect_done();
    return has ? std::optional<std::uint64_t>(epoch) : std::nullopt;
}

class BitListIssuer : public IssuerAgent {
public:
    BitListIssuer(Issuer identity, const MethodParams& params)
        : IssuerAgent(std::move(identity), params), bits_(params.capacity) {
        if (params.capacity == 0) {
            throw Error(ErrorCode::ConfigError, "bit list needs a capacity");
        }
    }

    Bytes handle(Topic topic, ByteView request, ActorRef caller, LogicalTime now) override {
        if (topic != Topic::StatusQuery) {
            return IssuerAgent::handle(topic, request, caller, now);
        }
        const auto cached = parse_snapshot_request(request);
        log_transaction(caller, std::nullopt, now);
        if (cached && *cached == bits_.epoch().epoch) {
            return Bytes{kNotModified};
        }
        return bits_.serialize();
    }

protected:
    ClaimMap extra_claims(std::uint64_t ordinal) override {
        if (ordinal >= bits_.capacity()) {
            throw Error(ErrorCode::OutOfRange, "status list is full");
        }
        return {{std::string(kStatusIndexClaim), std::to_string(ordinal)}};
    }

    void on_publish(const std::vector<CredentialId>& newly, Channel& ch) override {
        for (const auto& id : newly) {
            bits_.set(entry(id).ordinal, true);
        }
        bits_.set_epoch(ch.now());
        ch.note_local(Phase::Revocation, Topic::LocalUpdate);
    }

    void append_state(Writer& w) const override { w.field(bits_.serialize()); }

private:
    StatusBitArray bits_;
};

class BitListVerifier : public VerifierAgent {
public:
    explicit BitListVerifier(const MethodParams& p) : VerifierAgent(MethodKind::CompressedBitList, p) {}

protected:
    Status check_status(const OpenedPresentation& p, Channel& ch) override {
        const auto ordinal = status_index(p.credential);
        if (!ordinal) {
            return {false, VerifyReason::Malformed, false, 0};
        }
        std::optional<std::uint64_t> cached_epoch;
        if (cache_) {
            cached_epoch = cache_->epoch().epoch;
        }
        const auto resp = ch.call_issuer(Phase::Verification, Topic::StatusQuery, snapshot_request(cached_epoch),
                                         Topic::StatusResponse);
        std::uint64_t downloaded = 0;
        if (!(resp.size() == 1 && resp[0] == kNotModified)) {
            cache_ = StatusBitArray::parse(resp);
            downloaded = resp.size();
        }
        if (!cache_ || *ordinal >= cache_->capacity()) {
            return {false, VerifyReason::Malformed, true, downloaded};
        }
        const bool revoked = cache_->get(*ordinal);
        return {!revoked, revoked ? VerifyReason::Revoked : VerifyReason::Ok, true, downloaded};
    }

    void append_state(Writer& w) const override { w.field(cache_ ? cache_->serialize() : Bytes{}); }

private:
    std::optional<StatusBitArray> cache_;
};

// ---------------------------------------------------------------- bloom list

constexpr const char* kBloomKey = "bloom-list";

class BloomPublication : public Publication {
public:
    void update(Bytes filter, std::uint64_t epoch) {
        filter_ = std::move(filter);
        epoch_ = epoch;
    }

    Bytes answer(ByteView request) const override {
        const auto cached = parse_snapshot_request(request);
        if (cached && *cached == epoch_) {
            return Bytes{kNotModified};
        }
        Writer w;
        w.u64(epoch_).field(filter_);
        return std::move(w).take();
    }

    Bytes serialize() const override {
        Writer w;
        w.u64(epoch_).field(filter_);
        return std::move(w).take();
    }

private:
    Bytes filter_;
    std::uint64_t epoch_ = 0;
};

class BloomIssuer : public IssuerAgent {
public:
    BloomIssuer(Issuer identity, const MethodParams& params)
        : IssuerAgent(std::move(identity), params), filter_(params.bloom_bits, params.bloom_hashes) {}

    Bytes handle(Topic topic, ByteView request, ActorRef caller, LogicalTime now) override {
        if (topic != Topic::StatusQuery) {
            return IssuerAgent::handle(topic, request, caller, now);
        }
        Reader r(request);
        const auto id = id_from(r.field());
        const auto nonce = r.field();
        const auto sig = r.field();
        r.expect_done();
        try {
            require_holder_signature(id, holder_message("bloom-escalation", {id.view(), nonce}), sig);
        } catch (const Error&) {
            throw Error(ErrorCode::AccessDenied, "escalation not authorised by the holder");
        }
        log_transaction(caller, id, now);
        return status_byte(is_revoked(id));
    }

protected:
    std::optional<Bytes> on_issue(const Credential&, const Entry&, Channel& ch) override {
        if (!published_) {
            publish_filter(Phase::Issuance, ch);
        }
        return std::nullopt;
    }

    void on_publish(const std::vector<CredentialId>& newly, Channel& ch) override {
        for (const auto& id : newly) {
            filter_.insert(id.view());
        }
        ch.note_local(Phase::Revocation, Topic::LocalUpdate);
        publish_filter(Phase::Revocation, ch);
    }

    void append_state(Writer& w) const override { w.field(filter_.serialize()); }

private:
    void publish_filter(Phase phase, Channel& ch) {
        auto bytes = filter_.serialize();
        ch.publish(phase, bytes);
        ch.board().ensure<BloomPublication>(kBloomKey).update(std::move(bytes), ch.now().epoch);
        published_ = true;
    }

    BloomFilter filter_;
    bool published_ = false;
};

class BloomHolder : public PassiveHolder {
public:
    using PassiveHolder::PassiveHolder;

protected:
    Bytes clear_extras(ByteView nonce, Channel&) override {
        const auto sig = sign("bloom-escalation", {credential().id.view(), nonce});
        return Bytes(sig.begin(), sig.end());
    }
};

class BloomVerifier : public VerifierAgent {
public:
    explicit BloomVerifier(const MethodParams& p) : VerifierAgent(MethodKind::BloomList, p) {}

    std::optional<bool> status_by_id(const CredentialId& id, Channel& ch) override {
        refresh(ch);
        if (!cache_->maybe_contains(id.view())) {
            return true;
        }
        try {
            return escalate(id, {}, {}, ch);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::AccessDenied) {
                return std::nullopt;
            }
            throw;
        }
    }

protected:
    Status check_status(const OpenedPresentation& p, Channel& ch) override {
        const auto downloaded = refresh(ch);
        if (!cache_->maybe_contains(p.credential.id.view())) {
            return {true, VerifyReason::Ok, false, downloaded};
        }
        const bool valid = escalate(p.credential.id, p.envelope.nonce, p.extras, ch);
        return {valid, valid ? VerifyReason::Ok : VerifyReason::Revoked, true, downloaded + 1};
    }

    void append_state(Writer& w) const override {
        w.u64(cache_epoch_).field(cache_ ? cache_->serialize() : Bytes{});
    }

private:
    std::uint64_t refresh(Channel& ch) {
        std::optional<std::uint64_t> cached;
        if (cache_) {
            cached = cache_epoch_;
        }
        const auto resp = ch.read_registry(Phase::Verification, kBloomKey, snapshot_request(cached));
        if (resp.size() == 1 && resp[0] == kNotModified) {
            return 0;
        }
        Reader r(resp);
        cache_epoch_ = r.u64();
        cache_ = BloomFilter::parse(r.field());
        r.expect_done();
        return resp.size();
    }

    bool escalate(const CredentialId& id, ByteView nonce, ByteView sig, Channel& ch) {
        Writer q;
        q.field(id.view()).field(nonce).field(sig);
        return status_valid(ch.call_issuer(Phase::Verification, Topic::StatusQuery, q.bytes(), Topic::StatusResponse));
    }

    std::optional<BloomFilter> cache_;
    std::uint64_t cache_epoch_ = 0;
};

}  // namespace

std::unique_ptr<IssuerAgent> make_simple_list_issuer(Issuer identity, const MethodParams& params) {
    return std::make_unique<SimpleListIssuer>(std::move(identity), params);
}
std::unique_ptr<HolderAgent> make_simple_list_holder(SigningKey key, Digest secret, const MethodParams& params) {
    return std::make_unique<PassiveHolder>(MethodKind::SimpleList, std::move(key), secret, params);
}
std::unique_ptr<VerifierAgent> make_simple_list_verifier(const MethodParams& params) {
    return std::make_unique<SimpleListVerifier>(params);
}

std::unique_ptr<IssuerAgent> make_hidden_list_issuer(Issuer identity, const MethodParams& params) {
    return std::make_unique<HiddenListIssuer>(std::move(identity), params);
}
std::unique_ptr<HolderAgent> make_hidden_list_holder(SigningKey key, Digest secret, const MethodParams& params) {
    return std::make_unique<HiddenListHolder>(MethodKind::HiddenList, std::move(key), secret, params);
}
std::unique_ptr<VerifierAgent> make_hidden_list_verifier(const MethodParams& params) {
    return std::make_unique<HiddenListVerifier>(params);
}

std::unique_ptr<IssuerAgent> make_bitlist_issuer(Issuer identity, const MethodParams& params) {
    return std::make_unique<BitListIssuer>(std::move(identity), params);
}
std::unique_ptr<HolderAgent> make_bitlist_holder(SigningKey key, Digest secret, const MethodParams& params) {
    return std::make_unique<PassiveHolder>(MethodKind::CompressedBitList, std::move(key), secret, params);
}
std::unique_ptr<VerifierAgent> make_bitlist_verifier(const MethodParams& params) {
    return std::make_unique<BitListVerifier>(params);
}

std::unique_ptr<IssuerAgent> make_bloom_issuer(Issuer identity, const MethodParams& params) {
    return std::make_unique<BloomIssuer>(std::move(identity), params);
}
std::unique_ptr<HolderAgent> make_bloom_holder(SigningKey key, Digest secret, const MethodParams& params) {
    return std::make_unique<BloomHolder>(MethodKind::BloomList, std::move(key), secret, params);
}
std::unique_ptr<VerifierAgent> make_bloom_verifier(const MethodParams& params) {
    return std::make_unique<BloomVerifier>(params);
}

}  // namespace revoc::detail
