#include "revoc/sim/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <json.hpp>
#include <set>
#include <sstream>

#include "revoc/core/errors.hpp"
#include "revoc/core/hash.hpp"
#include "revoc/core/rng.hpp"

namespace revoc {

namespace {

class Stopwatch {
public:
    explicit Stopwatch(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
    ~Stopwatch() {
        sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    double& sink_;
    std::chrono::steady_clock::time_point start_;
};

std::string hex8(const Digest& d) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < 8; ++i) {
        out.push_back(kHex[d[i] >> 4]);
        out.push_back(kHex[d[i] & 15]);
    }
    return out;
}

ClaimMap make_claims(std::uint64_t seed, std::uint64_t holder, std::uint32_t count) {
    ClaimMap claims;
    for (std::uint32_t k = 0; k < count; ++k) {
        claims["claim_" + std::to_string(k)] = hex8(derive_seed(seed, "claim", holder * 1024 + k));
    }
    return claims;
}

}  // namespace

struct Simulation::Impl {
    explicit Impl(const Scenario& sc)
        : params(sc.params),
          net(sc.seed, sc.retain_payloads),
          sealer(derive_seed(sc.seed, "sealer")),
          services{net, board, keys, sealer, params, nullptr},
          rng(sc.seed) {
        if (params.capacity == 0) params.capacity = sc.population;
        auto identity = Issuer::from_seed(derive_seed(sc.seed, "issuer"));
        keys.register_issuer(identity.id(), identity.key().public_key());
        issuer = make_issuer(sc.method, std::move(identity), params);
        services.issuer = issuer.get();
        holders.reserve(sc.population);
        for (std::uint64_t i = 0; i < sc.population; ++i) {
            holders.push_back(make_holder(sc.method, SigningKey::from_seed(derive_seed(sc.seed, "holder", i)),
                                          derive_seed(sc.seed, "holder-secret", i), params));
        }
        // the last verifier is the outsider used for id-only lookups
        for (std::uint32_t v = 0; v <= sc.verifiers; ++v) {
            verifiers.push_back(make_verifier(sc.method, params));
        }
        ids.resize(sc.population);
    }

    Channel channel(ActorRef ref) { return Channel(services, ref); }

    std::vector<Digest> state_digests() const {
        std::vector<Digest> out;
        out.reserve(holders.size() + verifiers.size() + 2);
        out.push_back(sha256(issuer->serialize_state()));
        out.push_back(sha256(board.serialize_state()));
        for (const auto& h : holders) out.push_back(sha256(h->serialize_state()));
        for (const auto& v : verifiers) out.push_back(sha256(v->serialize_state()));
        return out;
    }

    ActorRef actor_at(std::size_t slot) const {
        if (slot == 0) return kIssuerRef;
        if (slot == 1) return kRegistryRef;
        slot -= 2;
        if (slot < holders.size()) return {Role::Holder, static_cast<std::uint32_t>(slot)};
        return {Role::Verifier, static_cast<std::uint32_t>(slot - holders.size())};
    }

    MethodParams params;
    Network net;
    PublicBoard board;
    KeyRegistry keys;
    PresentationSealer sealer;
    Services services;
    std::unique_ptr<IssuerAgent> issuer;
    std::vector<std::unique_ptr<HolderAgent>> holders;
    std::vector<std::unique_ptr<VerifierAgent>> verifiers;
    std::vector<std::optional<CredentialId>> ids;
    DeterministicRng rng;
    std::uint64_t nonce_counter = 0;
    OpCounters ops_at_start;
};

Simulation::Simulation(Scenario scenario) : sc_(std::move(scenario)) {
    sc_.validate();
    // Shared RSA parameters are generated once per process; do it before the
    // counters are sampled so op counts do not depend on run order.
    if (sc_.method == MethodKind::RsaAccumulator) {
        (void)rsa_params_for(sc_.params.profile);
    }
    const OpCounters before = op_counters();
    impl_ = std::make_unique<Impl>(sc_);
    impl_->ops_at_start = before;
}

Simulation::~Simulation() = default;

LogicalTime Simulation::now() const {
    return impl_->net.now();
}

const Ledger& Simulation::ledger() const {
    return impl_->net.ledger();
}

struct Simulation::AuditScope {
    AuditScope(Impl* impl, bool enabled, bool clock_tick, std::uint64_t& violations)
        : impl_(impl), enabled_(enabled), tick_(clock_tick), violations_(violations) {
        if (enabled_) {
            before_ = impl_->state_digests();
            ledger_mark_ = impl_->net.ledger().size();
        }
    }
    ~AuditScope() {
        if (!enabled_ || std::uncaught_exceptions() > 0) return;
        const auto after = impl_->state_digests();
        const auto& recs = impl_->net.ledger().records();
        for (std::size_t slot = 0; slot < after.size(); ++slot) {
            if (after[slot] == before_[slot]) continue;
            const ActorRef a = impl_->actor_at(slot);
            if (tick_ && (a.role == Role::Issuer || a.role == Role::Registry)) continue;
            bool explained = false;
            for (std::size_t i = ledger_mark_; i < recs.size() && !explained; ++i) {
                explained = recs[i].involves(a);
            }
            if (!explained) ++violations_;
        }
    }

    Impl* impl_;
    bool enabled_;
    bool tick_;
    std::uint64_t& violations_;
    std::vector<Digest> before_;
    std::size_t ledger_mark_ = 0;
};

CredentialId Simulation::issue(std::uint64_t h) {
    if (h >= sc_.population) throw Error(ErrorCode::ConfigError, "unknown holder");
    if (impl_->ids[h]) throw Error(ErrorCode::ConfigError, "holder already has a credential");
    AuditScope audit(impl_.get(), sc_.audit, false, audit_violations_);
    Stopwatch sw(timings_.issue);
    auto& holder = *impl_->holders[h];
    const ActorRef href{Role::Holder, static_cast<std::uint32_t>(h)};
    auto ich = impl_->channel(kIssuerRef);
    auto result = impl_->issuer->issue(holder.id(), make_claims(sc_.seed, h, sc_.claim_count), ich);
    const Topic delivery =
        method_info(sc_.method).credential_is_artifact ? Topic::RevocationArtifact : Topic::CredentialDelivery;
    impl_->net.send(kIssuerRef, href, Phase::Issuance, delivery, result.credential.serialize());
    if (result.artifact) {
        impl_->net.send(kIssuerRef, href, Phase::Issuance, Topic::RevocationArtifact, *result.artifact);
    }
    impl_->ids[h] = result.credential.id;
    holder.accept(std::move(result.credential), std::move(result.artifact));
    return *impl_->ids[h];
}

void Simulation::revoke(std::uint64_t h) {
    if (h >= sc_.population || !impl_->ids[h]) throw Error(ErrorCode::NotMember, "holder has no credential");
    AuditScope audit(impl_.get(), sc_.audit, false, audit_violations_);
    Stopwatch sw(timings_.revoke);
    auto ich = impl_->channel(kIssuerRef);
    impl_->issuer->revoke(*impl_->ids[h], ich);
}

void Simulation::advance() {
    {
        AuditScope audit(impl_.get(), sc_.audit, true, audit_violations_);
        Stopwatch sw(timings_.publish);
        impl_->net.set_epoch(LogicalTime{now().epoch + 1});
        auto ich = impl_->channel(kIssuerRef);
        impl_->issuer->publish(ich);
    }
    const std::uint64_t n = sc_.population;
    switch (sc_.sync.kind) {
        case SyncPolicyKind::Eager:
            for (std::uint64_t h = 0; h < n; ++h) {
                if (impl_->ids[h]) sync(h);
            }
            break;
        case SyncPolicyKind::Sampled:
            for (std::uint64_t i = 0; i < sc_.sync.sample; ++i) {
                const std::uint64_t h = i * n / sc_.sync.sample;
                if (impl_->ids[h]) sync(h);
            }
            break;
        case SyncPolicyKind::OnDemand:
        case SyncPolicyKind::Manual:
            break;
    }
}

SyncStatus Simulation::sync(std::uint64_t h) {
    if (h >= sc_.population || !impl_->ids[h]) throw Error(ErrorCode::NotMember, "holder has no credential");
    AuditScope audit(impl_.get(), sc_.audit, false, audit_violations_);
    Stopwatch sw(timings_.sync);
    auto hch = impl_->channel({Role::Holder, static_cast<std::uint32_t>(h)});
    const SyncStatus status = impl_->holders[h]->sync(hch);
    syncs_.push_back({now().epoch, h, status});
    return status;
}

VerifyOutcome Simulation::verify(std::uint64_t h, std::uint32_t v) {
    if (h >= sc_.population || !impl_->ids[h]) throw Error(ErrorCode::NotMember, "holder has no credential");
    if (v >= sc_.verifiers) throw Error(ErrorCode::ConfigError, "unknown verifier");
    AuditScope audit(impl_.get(), sc_.audit, false, audit_violations_);
    Stopwatch sw(timings_.verify);
    const ActorRef href{Role::Holder, static_cast<std::uint32_t>(h)};
    const ActorRef vref{Role::Verifier, v};
    const Digest nd = derive_seed(sc_.seed, "nonce", impl_->nonce_counter++);
    const Bytes nonce(nd.begin(), nd.end());
    auto& holder = *impl_->holders[h];
    const bool presync = sc_.sync.syncs_before_presenting();
    const Bytes presentation = impl_->net.call(
        vref, href, Phase::Verification, Topic::PresentationRequest, nonce, Topic::Presentation,
        [&](ByteView n) {
            if (presync && holder.needs_sync(now())) {
                auto hch = impl_->channel(href);
                syncs_.push_back({now().epoch, h, holder.sync(hch)});
            }
            auto hch = impl_->channel(href);
            return holder.present(n, hch);
        });
    auto vch = impl_->channel(vref);
    const VerifyOutcome out = impl_->verifiers[v]->verify(presentation, nonce, vch);
    verifications_.push_back({now().epoch, h, v, out});
    return out;
}

std::optional<bool> Simulation::recheck(std::uint32_t v, std::size_t index) {
    if (v >= sc_.verifiers) throw Error(ErrorCode::ConfigError, "unknown verifier");
    AuditScope audit(impl_.get(), sc_.audit, false, audit_violations_);
    auto vch = impl_->channel({Role::Verifier, v});
    return impl_->verifiers[v]->recheck(index, vch);
}

std::optional<bool> Simulation::outsider_status(std::uint64_t h) {
    if (h >= sc_.population || !impl_->ids[h]) throw Error(ErrorCode::NotMember, "holder has no credential");
    AuditScope audit(impl_.get(), sc_.audit, false, audit_violations_);
    auto vch = impl_->channel({Role::Verifier, sc_.verifiers});
    return impl_->verifiers[sc_.verifiers]->status_by_id(*impl_->ids[h], vch);
}

bool Simulation::has_credential(std::uint64_t h) const {
    return h < sc_.population && impl_->ids[h].has_value();
}

CredentialId Simulation::credential_id(std::uint64_t h) const {
    if (!has_credential(h)) throw Error(ErrorCode::NotMember, "holder has no credential");
    return *impl_->ids[h];
}

Digest Simulation::artifact_digest(std::uint64_t h) const {
    return impl_->holders.at(h)->artifact_digest();
}

const HolderAgent& Simulation::holder(std::uint64_t index) const {
    return *impl_->holders.at(index);
}

const IssuerAgent& Simulation::issuer() const {
    return *impl_->issuer;
}

void Simulation::apply(const ScriptEvent& ev) {
    switch (ev.kind) {
        case EventKind::Issue: issue(ev.holder); break;
        case EventKind::Revoke: revoke(ev.holder); break;
        case EventKind::Sync: sync(ev.holder); break;
        case EventKind::Verify: verify(ev.holder, ev.verifier); break;
        case EventKind::Advance: advance(); break;
    }
}

void Simulation::run() {
    if (!sc_.script.empty()) {
        for (const auto& ev : sc_.script) apply(ev);
        return;
    }
    for (std::uint64_t h = 0; h < sc_.population; ++h) issue(h);

    // holders still eligible for random revocation, kept in a swap-remove pool
    std::vector<std::uint64_t> active(sc_.population);
    std::vector<std::uint64_t> slot(sc_.population);
    for (std::uint64_t h = 0; h < sc_.population; ++h) active[h] = slot[h] = h;
    auto retire = [&](std::uint64_t h) {
        const std::uint64_t i = slot[h];
        if (i >= active.size() || active[i] != h) return;
        const std::uint64_t last = active.back();
        active[i] = last;
        slot[last] = i;
        active.pop_back();
    };

    auto& rng = impl_->rng;
    for (std::uint64_t e = 1; e <= sc_.epochs; ++e) {
        advance();
        for (const auto& entry : sc_.revocations.entries) {
            if (entry.epoch != e) continue;
            revoke(entry.holder);
            retire(entry.holder);
        }
        for (std::uint64_t k = 0; k < sc_.revocations.per_epoch && !active.empty(); ++k) {
            const std::uint64_t h = active[rng.below(active.size())];
            revoke(h);
            retire(h);
        }
        for (const auto& entry : sc_.verifications.entries) {
            if (entry.epoch == e) verify(entry.holder, entry.verifier);
        }
        for (std::uint64_t k = 0; k < sc_.verifications.per_epoch; ++k) {
            const std::uint64_t h = rng.below(sc_.population);
            const auto v = static_cast<std::uint32_t>(rng.below(sc_.verifiers));
            verify(h, v);
        }
    }
}

Metrics Simulation::metrics() const {
    Metrics m;
    m.method = std::string(to_string(sc_.method));
    m.population = sc_.population;
    m.epochs = sc_.epochs;
    m.seed = sc_.seed;

    const auto& ledger = impl_->net.ledger();
    m.ledger_records = ledger.size();
    m.ledger_bytes = ledger.total_payload_bytes();
    std::set<std::uint32_t> syncing;
    bool have_refresh = false;
    for (const auto& r : ledger.records()) {
        const auto p = static_cast<std::size_t>(r.phase);
        ++m.phase_records[p];
        m.phase_bytes[p] += r.payload_bytes;
        if (r.phase == Phase::Revocation && r.to.role == Role::Holder && !r.is_local()) {
            m.sync_download_bytes += r.payload_bytes;
            syncing.insert(r.to.index);
        }
        if (r.phase == Phase::Issuance && r.topic == Topic::RevocationArtifact) {
            m.artifact_bytes_max = std::max(m.artifact_bytes_max, r.payload_bytes);
        }
        if (r.topic == Topic::RefreshResponse && !r.error) {
            m.refresh_payload_min = have_refresh ? std::min(m.refresh_payload_min, r.payload_bytes) : r.payload_bytes;
            m.refresh_payload_max = std::max(m.refresh_payload_max, r.payload_bytes);
            have_refresh = true;
        }
        if (r.topic == Topic::Publication) {
            m.publication_bytes_max = std::max(m.publication_bytes_max, r.payload_bytes);
        }
        if (r.phase == Phase::Verification && r.involves(Role::Issuer)) {
            ++m.verification_issuer_records;
        }
        if (r.phase == Phase::Verification && r.topic == Topic::Presentation) {
            m.presentation_bytes += r.payload_bytes;
        }
    }
    m.syncing_holders = syncing.size();

    m.issuer_storage_bytes = impl_->issuer->serialize_state().size();
    for (const auto& h : impl_->holders) {
        const auto s = h->serialize_state().size();
        m.holder_storage_bytes += s;
        m.holder_storage_max = std::max<std::uint64_t>(m.holder_storage_max, s);
    }
    for (const auto& v : impl_->verifiers) m.verifier_storage_bytes += v->serialize_state().size();
    m.registry_storage_bytes = impl_->board.storage_bytes();

    for (const auto& s : syncs_) {
        if (s.status == SyncStatus::Skipped) continue;
        ++m.sync_attempts;
        if (s.status == SyncStatus::Updated) ++m.sync_updates;
        if (s.status == SyncStatus::Failed) ++m.sync_failures;
    }
    for (const auto& v : verifications_) {
        ++m.verifications;
        if (v.outcome.valid) ++m.verifications_valid;
        if (v.outcome.issuer_contacted) ++m.verification_issuer_contacts;
        m.status_query_bytes += v.outcome.bytes_queried;
        m.status_query_bytes_max = std::max(m.status_query_bytes_max, v.outcome.bytes_queried);
    }
    m.ops = op_counters() - impl_->ops_at_start;
    m.audit_violations = audit_violations_;
    return m;
}

std::vector<std::pair<std::string, std::string>> Metrics::fields() const {
    std::vector<std::pair<std::string, std::string>> f;
    auto add = [&](const char* name, std::uint64_t v) { f.emplace_back(name, std::to_string(v)); };
    f.emplace_back("method", method);
    add("population", population);
    add("epochs", epochs);
    add("seed", seed);
    add("ledger_records", ledger_records);
    add("ledger_bytes", ledger_bytes);
    add("issuance_records", phase_records[0]);
    add("issuance_bytes", phase_bytes[0]);
    add("revocation_records", phase_records[1]);
    add("revocation_bytes", phase_bytes[1]);
    add("verification_records", phase_records[2]);
    add("verification_bytes", phase_bytes[2]);
    add("issuer_storage_bytes", issuer_storage_bytes);
    add("holder_storage_bytes", holder_storage_bytes);
    add("holder_storage_max", holder_storage_max);
    add("verifier_storage_bytes", verifier_storage_bytes);
    add("registry_storage_bytes", registry_storage_bytes);
    add("sync_attempts", sync_attempts);
    add("sync_updates", sync_updates);
    add("sync_failures", sync_failures);
    add("sync_download_bytes", sync_download_bytes);
    add("syncing_holders", syncing_holders);
    // fixed-point so the text is platform independent
    add("mean_holder_sync_bytes_milli",
        syncing_holders == 0 ? 0 : (sync_download_bytes * 1000 + syncing_holders / 2) / syncing_holders);
    add("artifact_bytes_max", artifact_bytes_max);
    add("refresh_payload_min", refresh_payload_min);
    add("refresh_payload_max", refresh_payload_max);
    add("publication_bytes_max", publication_bytes_max);
    add("verifications", verifications);
    add("verifications_valid", verifications_valid);
    add("verification_issuer_contacts", verification_issuer_contacts);
    add("verification_issuer_records", verification_issuer_records);
    add("presentation_bytes", presentation_bytes);
    add("status_query_bytes", status_query_bytes);
    add("status_query_bytes_max", status_query_bytes_max);
    add("op_hashes", ops.hashes);
    add("op_modexps", ops.modexps);
    add("op_signatures", ops.signatures);
    add("op_signature_checks", ops.signature_checks);
    add("op_prime_searches", ops.prime_searches);
    add("audit_violations", audit_violations);
    return f;
}

std::string metrics_csv_header() {
    std::string out;
    for (const auto& [name, value] : Metrics{}.fields()) {
        if (!out.empty()) out += ',';
        out += name;
    }
    return out;
}

std::string metrics_csv_row(const Metrics& m) {
    std::string out;
    for (const auto& [name, value] : m.fields()) {
        if (!out.empty()) out += ',';
        out += value;
    }
    return out;
}

std::string metrics_to_json(const std::vector<Metrics>& rows) {
    nlohmann::ordered_json doc;
    doc["schema"] = "revoc.metrics/1";
    auto arr = nlohmann::ordered_json::array();
    for (const auto& m : rows) {
        nlohmann::ordered_json o;
        for (const auto& [name, value] : m.fields()) {
            if (name == "method") {
                o[name] = value;
            } else {
                o[name] = std::stoull(value);
            }
        }
        arr.push_back(std::move(o));
    }
    doc["runs"] = std::move(arr);
    return doc.dump(2) + "\n";
}

RunResult run_scenario(const Scenario& scenario) {
    Simulation sim(scenario);
    sim.run();
    return RunResult{sim.ledger(), sim.metrics(), sim.verifications(), sim.timings()};
}

}  // namespace revoc
