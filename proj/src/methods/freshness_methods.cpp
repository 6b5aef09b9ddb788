// Freshness methods: the holder periodically obtains a newly dated artifact
// from the issuer (a re-issued credential, or a small linked validity
// credential); verifiers only check signatures and the date.

#include "methods/factories.hpp"
#include "revoc/core/errors.hpp"

namespace revoc::detail {
namespace {

Bytes refresh_request(const CredentialId& id, LogicalTime now, const Signature& sig) {
    Writer w;
    w.field(id.view()).u64(now.epoch).field(sig);
    return std::move(w).take();
}

/// Shared issuer half: authenticate, refuse revoked, otherwise hand out a new artifact.
class RefreshingIssuer : public IssuerAgent {
public:
    using IssuerAgent::IssuerAgent;

    Bytes handle(Topic topic, ByteView request, ActorRef caller, LogicalTime now) override {
        if (topic != Topic::RefreshRequest) {
            return IssuerAgent::handle(topic, request, caller, now);
        }
        Reader r(request);
        CredentialId id;
        try {
            id = CredentialId::from(r.field());
        } catch (const std::invalid_argument&) {
            throw Error(ErrorCode::Malformed, "credential id must be 32 bytes");
        }
        const auto epoch = r.u64();
        const auto sig = r.field();
        r.expect_done();
        Bytes epoch_bytes;
        put_u64_be(epoch_bytes, epoch);
        if (epoch != now.epoch) {
            throw Error(ErrorCode::Unauthorized, "refresh request for another epoch");
        }
        require_holder_signature(id, holder_message("refresh", {id.view(), epoch_bytes}), sig);
        if (is_revoked(id)) {
            throw Error(ErrorCode::Revoked, "credential has been revoked");
        }
        return refresh(id, now);
    }

protected:
    virtual Bytes refresh(const CredentialId& id, LogicalTime now) = 0;

    void on_publish(const std::vector<CredentialId>&, Channel& ch) override {
        ch.note_local(Phase::Revocation, Topic::LocalUpdate);
    }
};

/// Shared holder half: refresh once per epoch.
class RefreshingHolder : public HolderAgent {
public:
    using HolderAgent::HolderAgent;

    SyncStatus sync(Channel& ch) override {
        if (!credential_ || !needs_sync(ch.now())) {
            return last_sync_ = SyncStatus::Skipped;
        }
        const auto& id = credential_->id;
        Bytes epoch_bytes;
        put_u64_be(epoch_bytes, ch.now().epoch);
        const auto sig = sign("refresh", {id.view(), epoch_bytes});
        Bytes resp;
        try {
            resp = ch.call_issuer(Phase::Revocation, Topic::RefreshRequest, refresh_request(id, ch.now(), sig),
                                  Topic::RefreshResponse);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Revoked && e.code() != ErrorCode::Unauthorized) {
                throw;
            }
            return last_sync_ = SyncStatus::Failed;
        }
        install(resp);
        return last_sync_ = SyncStatus::Updated;
    }

protected:
    virtual void install(ByteView artifact) = 0;
};

// --------------------------------------------------------- credential update

class UpdateIssuer : public RefreshingIssuer {
public:
    using RefreshingIssuer::RefreshingIssuer;

protected:
    std::optional<Bytes> on_issue(const Credential& vc, const Entry&, Channel&) override {
        issued_.insert_or_assign(vc.id, vc);
        return std::nullopt;
    }

    Bytes refresh(const CredentialId& id, LogicalTime now) override {
        auto& stored = issued_.at(id);
        stored = reissue_credential(identity_, stored, now);
        return stored.serialize();
    }

    void append_state(Writer& w) const override {
        w.u64(issued_.size());
        for (const auto& [id, vc] : issued_) {
            w.field(vc.serialize());
        }
    }

private:
    std::map<CredentialId, Credential> issued_;
};

class UpdateHolder : public RefreshingHolder {
public:
    UpdateHolder(SigningKey key, Digest secret, const MethodParams& params)
        : RefreshingHolder(MethodKind::CredentialUpdate, std::move(key), secret, params) {}

    bool needs_sync(LogicalTime now) const override { return credential_ && credential_->issued_at < now; }

protected:
    void install(ByteView artifact) override {
        auto fresh = Credential::parse(artifact);
        if (fresh.id != credential_->id) {
            throw Error(ErrorCode::Malformed, "refreshed credential has another id");
        }
        credential_ = std::move(fresh);
    }

    Bytes artifact_bytes() const override { return credential_ ? credential_->serialize() : Bytes{}; }
};

class UpdateVerifier : public VerifierAgent {
public:
    explicit UpdateVerifier(const MethodParams& p) : VerifierAgent(MethodKind::CredentialUpdate, p) {}

protected:
    Status check_status(const OpenedPresentation& p, Channel& ch) override {
        const bool fresh = check_freshness(p.credential.issued_at, ch.now(), params_.max_age);
        return {fresh, fresh ? VerifyReason::Ok : VerifyReason::Stale, false, 0};
    }
};

// ---------------------------------------------------------------------- LVVC

class LvvcIssuer : public RefreshingIssuer {
public:
    using RefreshingIssuer::RefreshingIssuer;

protected:
    std::optional<Bytes> on_issue(const Credential& vc, const Entry&, Channel& ch) override {
        auto lvvc = issue_lvvc(identity_, vc.id, ch.now());
        auto bytes = lvvc.serialize();
        latest_.insert_or_assign(vc.id, std::move(lvvc));
        return bytes;
    }

    Bytes refresh(const CredentialId& id, LogicalTime now) override {
        auto lvvc = issue_lvvc(identity_, id, now);
        auto bytes = lvvc.serialize();
        latest_.insert_or_assign(id, std::move(lvvc));
        return bytes;
    }

    void append_state(Writer& w) const override {
        w.u64(latest_.size());
        for (const auto& [id, lvvc] : latest_) {
            w.raw(lvvc.serialize());
        }
    }

private:
    std::map<CredentialId, LinkedValidityCredential> latest_;
};

class LvvcHolder : public RefreshingHolder {
public:
    LvvcHolder(SigningKey key, Digest secret, const MethodParams& params)
        : RefreshingHolder(MethodKind::Lvvc, std::move(key), secret, params) {}

    bool needs_sync(LogicalTime now) const override { return lvvc_ && lvvc_->issued_at < now; }

protected:
    void on_accept(std::optional<Bytes> artifact) override {
        if (!artifact) {
            throw Error(ErrorCode::Incomplete, "credential without LVVC");
        }
        install(*artifact);
    }

    void install(ByteView artifact) override { lvvc_ = LinkedValidityCredential::parse(artifact); }

    Bytes material(ByteView, Channel&) override { return artifact_bytes(); }
    Bytes artifact_bytes() const override { return lvvc_ ? lvvc_->serialize() : Bytes{}; }

private:
    std::optional<LinkedValidityCredential> lvvc_;
};

class LvvcVerifier : public VerifierAgent {
public:
    explicit LvvcVerifier(const MethodParams& p) : VerifierAgent(MethodKind::Lvvc, p) {}

protected:
    Status check_status(const OpenedPresentation& p, Channel& ch) override {
        LinkedValidityCredential lvvc;
        try {
            lvvc = LinkedValidityCredential::parse(p.material);
        } catch (const Error&) {
            return {false, VerifyReason::Malformed, false, 0};
        }
        // Are the proofs validly signed? (the VC was checked by the caller)
        bool signed_ok = false;
        try {
            signed_ok = verify_signature(lvvc, ch.keys());
        } catch (const Error&) {
        }
        if (!signed_ok) {
            return {false, VerifyReason::BadSignature, false, 0};
        }
        // Are the VC and LVVC linked?
        if (!check_link(p.credential, lvvc)) {
            return {false, VerifyReason::Link, false, 0};
        }
        // Does the LVVC issuance date meet the freshness policy?
        if (!check_freshness(lvvc, ch.now(), params_.max_age)) {
            return {false, VerifyReason::Stale, false, 0};
        }
        return {true, VerifyReason::Ok, false, 0};
    }
};

}  // namespace

std::unique_ptr<IssuerAgent> make_update_issuer(Issuer identity, const MethodParams& params) {
    return std::make_unique<UpdateIssuer>(std::move(identity), params);
}
std::unique_ptr<HolderAgent> make_update_holder(SigningKey key, Digest secret, const MethodParams& params) {
    return std::make_unique<UpdateHolder>(std::move(key), secret, params);
}
std::unique_ptr<VerifierAgent> make_update_verifier(const MethodParams& params) {
    return std::make_unique<UpdateVerifier>(params);
}

std::unique_ptr<IssuerAgent> make_lvvc_issuer(Issuer identity, const MethodParams& params) {
    return std::make_unique<LvvcIssuer>(std::move(identity), params);
}
std::unique_ptr<HolderAgent> make_lvvc_holder(SigningKey key, Digest secret, const MethodParams& params) {
    return std::make_unique<LvvcHolder>(std::move(key), secret, params);
}
std::unique_ptr<VerifierAgent> make_lvvc_verifier(const MethodParams& params) {
    return std::make_unique<LvvcVerifier>(params);
}

}  // namespace revoc::detail
