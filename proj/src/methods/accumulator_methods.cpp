// Accumulator methods: holders keep a membership witness (RSA) or path
// (Merkle) current; verifiers check it against the published value.
//
// The accumulated item is H(credential id || salt) with a per-credential salt
// known only to the issuer and the holder, so the public update log does not
// reveal which credential ids were added or removed.

#include "methods/factories.hpp"
#include "revoc/accumulators/bigint.hpp"
#include "revoc/accumulators/merkle_accumulator.hpp"
#include "revoc/accumulators/rsa_accumulator.hpp"
#include "revoc/core/errors.hpp"
#include "revoc/core/hash.hpp"

namespace revoc::detail {
namespace {

Bytes accumulated_item(std::string_view domain, const CredentialId& id, ByteView salt) {
    const auto d = tagged_hash(domain, {id.view(), salt});
    return Bytes(d.begin(), d.end());
}

// ------------------------------------------------------------------------ RSA

constexpr const char* kRsaKey = "rsa-accumulator";
constexpr std::string_view kRsaDomain = "rsa-item";

class RsaPublication : public Publication {
public:
    explicit RsaPublication(const RsaParams& params) : params_(params.public_view()), value_(params.generator) {}

    void apply(const AccumulatorDelta& delta, const mpz_class& value) {
        deltas_.push_back(delta);
        value_ = value;
    }

    // 'V'                 -> version, value
    // 'D' since(u64)      -> version, value, count, deltas
    Bytes answer(ByteView request) const override {
        Reader r(request);
        const auto kind = r.tag();
        Writer w;
        w.u64(deltas_.size()).field(to_fixed_bytes(value_, params_.modulus_bytes));
        if (kind == 'V') {
            r.expect_done();
            return std::move(w).take();
        }
        if (kind != 'D') {
            throw Error(ErrorCode::Malformed, "unknown accumulator read");
        }
        const auto since = r.u64();
        r.expect_done();
        if (since > deltas_.size()) {
            throw Error(ErrorCode::OutOfRange, "witness version ahead of the accumulator");
        }
        w.u64(deltas_.size() - since);
        for (std::size_t i = since; i < deltas_.size(); ++i) {
            w.field(deltas_[i].serialize(params_.modulus_bytes));
        }
        return std::move(w).take();
    }

    Bytes serialize() const override {
        Writer w;
        w.field(to_fixed_bytes(params_.modulus, params_.modulus_bytes))
            .field(to_fixed_bytes(params_.generator, params_.modulus_bytes))
            .field(to_fixed_bytes(value_, params_.modulus_bytes))
            .u64(deltas_.size());
        for (const auto& d : deltas_) {
            w.field(d.serialize(params_.modulus_bytes));
        }
        return std::move(w).take();
    }

private:
    RsaParams params_;
    mpz_class value_;
    std::vector<AccumulatorDelta> deltas_;
};

class RsaIssuer : public IssuerAgent {
public:
    RsaIssuer(Issuer identity, const MethodParams& params)
        : IssuerAgent(std::move(identity), params), acc_(rsa_params_for(params.profile), params.trapdoor) {}

protected:
    std::optional<Bytes> on_issue(const Credential& vc, const Entry&, Channel& ch) override {
        const auto salt = credential_secret("rsa-salt", vc.id);
        auto item = accumulated_item(kRsaDomain, vc.id, salt);
        const auto witness = acc_.add(item, ch.now());
        items_.emplace(vc.id, std::move(item));
        publish_last(Phase::Issuance, ch);
        Writer w;
        w.field(salt).field(witness.serialize(acc_.params().modulus_bytes));
        return std::move(w).take();
    }

    void on_publish(const std::vector<CredentialId>& newly, Channel& ch) override {
        ch.note_local(Phase::Revocation, Topic::LocalUpdate);
        for (const auto& id : newly) {
            acc_.remove(items_.at(id), ch.now());
            publish_last(Phase::Revocation, ch);
        }
    }

    void append_state(Writer& w) const override { w.field(acc_.serialize_state()); }

private:
    void publish_last(Phase phase, Channel& ch) {
        const auto& delta = acc_.deltas_since(acc_.version() - 1).front();
        Writer wire;
        wire.field(delta.serialize(acc_.params().modulus_bytes))
            .field(to_fixed_bytes(acc_.value(), acc_.params().modulus_bytes));
        ch.publish(phase, wire.bytes());
        ch.board().ensure<RsaPublication>(kRsaKey, acc_.params()).apply(delta, acc_.value());
    }

    RsaAccumulator acc_;
    std::map<CredentialId, Bytes> items_;
};

class RsaHolder : public HolderAgent {
public:
    RsaHolder(SigningKey key, Digest secret, const MethodParams& params)
        : HolderAgent(MethodKind::RsaAccumulator, std::move(key), secret, params),
          params_public_(rsa_params_for(params.profile).public_view()) {}

    bool needs_sync(LogicalTime) const override { return witness_.has_value() && !removed_; }

    SyncStatus sync(Channel& ch) override {
        if (!witness_) {
            return last_sync_ = SyncStatus::Skipped;
        }
        if (removed_) {
            return last_sync_ = SyncStatus::Failed;
        }
        Writer req;
        req.tag('D').u64(witness_->version);
        const auto resp = ch.read_registry(Phase::Revocation, kRsaKey, req.bytes());
        Reader r(resp);
        r.u64();
        r.field();
        const auto count = r.u64();
        std::vector<AccumulatorDelta> deltas;
        deltas.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) {
            deltas.push_back(AccumulatorDelta::parse(r.field()));
        }
        r.expect_done();
        try {
            witness_ = rsa_update_witness(*witness_, deltas, params_public_, ch.now());
        } catch (const Error& e) {
            if (e.code() != ErrorCode::MemberRevoked) {
                throw;
            }
            removed_ = true;
            return last_sync_ = SyncStatus::Failed;
        }
        return last_sync_ = count > 0 ? SyncStatus::Updated : SyncStatus::Skipped;
    }

protected:
    void on_accept(std::optional<Bytes> artifact) override {
        if (!artifact) {
            throw Error(ErrorCode::Incomplete, "accumulator credential without witness");
        }
        Reader r(*artifact);
        auto salt = r.field();
        salt_.assign(salt.begin(), salt.end());
        witness_ = RsaWitness::parse(r.field());
        r.expect_done();
    }

    Bytes material(ByteView, Channel&) override { return artifact_bytes(); }

    Bytes artifact_bytes() const override {
        if (!witness_) {
            return {};
        }
        Writer w;
        w.field(salt_).field(witness_->serialize(params_public_.modulus_bytes));
        return std::move(w).take();
    }

private:
    RsaParams params_public_;
    Bytes salt_;
    std::optional<RsaWitness> witness_;
    bool removed_ = false;
};

class RsaVerifier : public VerifierAgent {
public:
    explicit RsaVerifier(const MethodParams& p)
        : VerifierAgent(MethodKind::RsaAccumulator, p), params_public_(rsa_params_for(p.profile).public_view()) {}

protected:
    Status check_status(const OpenedPresentation& p, Channel& ch) override {
        Bytes item;
        RsaWitness witness;
        try {
            Reader r(p.material);
            item = accumulated_item(kRsaDomain, p.credential.id, r.field());
            witness = RsaWitness::parse(r.field());
            r.expect_done();
        } catch (const Error&) {
            return {false, VerifyReason::Malformed, false, 0};
        }
        const Bytes req{'V'};
        const auto resp = ch.read_registry(Phase::Verification, kRsaKey, req);
        Reader r(resp);
        r.u64();
        const auto value = from_bytes(r.field());
        r.expect_done();
        const bool ok =
            rsa_verify_membership(witness.value, primes_.prime_for(item), value, params_public_.modulus);
        return {ok, ok ? VerifyReason::Ok : VerifyReason::NotMember, false, resp.size()};
    }

private:
    RsaParams params_public_;
    PrimeCache primes_;
};

// --------------------------------------------------------------------- Merkle

constexpr const char* kMerkleKey = "merkle-accumulator";
constexpr std::string_view kMerkleDomain = "merkle-item";

class MerklePublication : public Publication {
public:
    void append(ByteView item) { tree_.append(item); }
    void remove(ByteView item) { tree_.remove(item); }

    // 'R'          -> root
    // 'P' item     -> root, path
    Bytes answer(ByteView request) const override {
        Reader r(request);
        const auto kind = r.tag();
        Writer w;
        w.field(tree_.root());
        if (kind == 'R') {
            r.expect_done();
            return std::move(w).take();
        }
        if (kind != 'P') {
            throw Error(ErrorCode::Malformed, "unknown merkle read");
        }
        const auto item = r.field();
        r.expect_done();
        w.field(tree_.prove(item).serialize());
        return std::move(w).take();
    }

    Bytes serialize() const override {
        Writer w;
        w.field(tree_.root()).u64(tree_.leaf_count());
        for (const auto& item : tree_.items()) {
            w.raw(item);
        }
        return std::move(w).take();
    }

private:
    MerkleAccumulator tree_;
};

class MerkleIssuer : public IssuerAgent {
public:
    using IssuerAgent::IssuerAgent;

protected:
    std::optional<Bytes> on_issue(const Credential& vc, const Entry&, Channel& ch) override {
        const auto salt = credential_secret("merkle-salt", vc.id);
        auto item = accumulated_item(kMerkleDomain, vc.id, salt);
        tree_.append(item);
        tree_.set_epoch(ch.now());
        publish_change('A', item, Phase::Issuance, ch);
        Writer w;
        w.field(salt).field(tree_.prove(item).serialize());
        items_.emplace(vc.id, std::move(item));
        return std::move(w).take();
    }

    void on_publish(const std::vector<CredentialId>& newly, Channel& ch) override {
        ch.note_local(Phase::Revocation, Topic::LocalUpdate);
        for (const auto& id : newly) {
            const auto& item = items_.at(id);
            tree_.remove(item);
            publish_change('R', item, Phase::Revocation, ch);
        }
        tree_.set_epoch(ch.now());
    }

    void append_state(Writer& w) const override {
        w.field(tree_.root()).u64(tree_.leaf_count());
        for (const auto& item : tree_.items()) {
            w.raw(item);
        }
    }

private:
    void publish_change(std::uint8_t op, ByteView item, Phase phase, Channel& ch) {
        Writer wire;
        wire.tag(op).field(item).field(tree_.root());
        ch.publish(phase, wire.bytes());
        auto& pub = ch.board().ensure<MerklePublication>(kMerkleKey);
        if (op == 'A') {
            pub.append(item);
        } else {
            pub.remove(item);
        }
    }

    MerkleAccumulator tree_;
    std::map<CredentialId, Bytes> items_;
};

class MerkleHolder : public HolderAgent {
public:
    MerkleHolder(SigningKey key, Digest secret, const MethodParams& params)
        : HolderAgent(MethodKind::MerkleAccumulator, std::move(key), secret, params) {}

    bool needs_sync(LogicalTime) const override { return path_.has_value() && !removed_; }

    SyncStatus sync(Channel& ch) override {
        if (!path_) {
            return last_sync_ = SyncStatus::Skipped;
        }
        if (removed_) {
            return last_sync_ = SyncStatus::Failed;
        }
        Writer req;
        req.tag('P').field(item_);
        Bytes resp;
        try {
            resp = ch.read_registry(Phase::Revocation, kMerkleKey, req.bytes());
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotPresent) {
                throw;
            }
            removed_ = true;
            return last_sync_ = SyncStatus::Failed;
        }
        Reader r(resp);
        r.field();
        auto path = MerklePath::parse(r.field());
        r.expect_done();
        const bool changed = !(path == *path_);
        path_ = std::move(path);
        return last_sync_ = changed ? SyncStatus::Updated : SyncStatus::Skipped;
    }

protected:
    void on_accept(std::optional<Bytes> artifact) override {
        if (!artifact) {
            throw Error(ErrorCode::Incomplete, "accumulator credential without path");
        }
        Reader r(*artifact);
        auto salt = r.field();
        salt_.assign(salt.begin(), salt.end());
        path_ = MerklePath::parse(r.field());
        r.expect_done();
        item_ = accumulated_item(kMerkleDomain, credential().id, salt_);
    }

    Bytes material(ByteView, Channel&) override { return artifact_bytes(); }

    Bytes artifact_bytes() const override {
        if (!path_) {
            return {};
        }
        Writer w;
        w.field(salt_).field(path_->serialize());
        return std::move(w).take();
    }

private:
    Bytes salt_;
    Bytes item_;
    std::optional<MerklePath> path_;
    bool removed_ = false;
};

class MerkleVerifier : public VerifierAgent {
public:
    explicit MerkleVerifier(const MethodParams& p) : VerifierAgent(MethodKind::MerkleAccumulator, p) {}

protected:
    Status check_status(const OpenedPresentation& p, Channel& ch) override {
        Bytes item;
        MerklePath path;
        try {
            Reader r(p.material);
            item = accumulated_item(kMerkleDomain, p.credential.id, r.field());
            path = MerklePath::parse(r.field());
            r.expect_done();
        } catch (const Error&) {
            return {false, VerifyReason::Malformed, false, 0};
        }
        const Bytes req{'R'};
        const auto resp = ch.read_registry(Phase::Verification, kMerkleKey, req);
        Reader r(resp);
        const auto root = r.fixed_field<32>();
        r.expect_done();
        const bool ok = merkle_verify(root, item, path);
        return {ok, ok ? VerifyReason::Ok : VerifyReason::NotMember, false, resp.size()};
    }
};

}  // namespace

std::unique_ptr<IssuerAgent> make_rsa_issuer(Issuer identity, const MethodParams& params) {
    return std::make_unique<RsaIssuer>(std::move(identity), params);
}
std::unique_ptr<HolderAgent> make_rsa_holder(SigningKey key, Digest secret, const MethodParams& params) {
    return std::make_unique<RsaHolder>(std::move(key), secret, params);
}
std::unique_ptr<VerifierAgent> make_rsa_verifier(const MethodParams& params) {
    return std::make_unique<RsaVerifier>(params);
}

std::unique_ptr<IssuerAgent> make_merkle_issuer(Issuer identity, const MethodParams& params) {
    return std::make_unique<MerkleIssuer>(std::move(identity), params);
}
std::unique_ptr<HolderAgent> make_merkle_holder(SigningKey key, Digest secret, const MethodParams& params) {
    return std::make_unique<MerkleHolder>(std::move(key), secret, params);
}
std::unique_ptr<VerifierAgent> make_merkle_verifier(const MethodParams& params) {
    return std::make_unique<MerkleVerifier>(params);
}

}  // namespace revoc::detail
