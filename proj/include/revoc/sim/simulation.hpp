#pragma once

// Deterministic scenario runner. One issuer, `population` holders (holder i
// owns credential i) and `verifiers` verifiers, all talking over a Network.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "revoc/core/op_counters.hpp"
#include "revoc/methods/method.hpp"
#include "revoc/sim/scenario.hpp"

namespace revoc {

struct VerificationRecord {
    std::uint64_t epoch = 0;
    std::uint64_t holder = 0;
    std::uint32_t verifier = 0;
    VerifyOutcome outcome;
};

struct SyncRecord {
    std::uint64_t epoch = 0;
    std::uint64_t holder = 0;
    SyncStatus status = SyncStatus::Skipped;
};

/// Everything here is derived from the ledger, the run's own records and
/// end-of-run state sizes, so it is reproducible byte for byte.
struct Metrics {
    std::string method;
    std::uint64_t population = 0;
    std::uint64_t epochs = 0;
    std::uint64_t seed = 0;

    std::uint64_t ledger_records = 0;
    std::uint64_t ledger_bytes = 0;
    std::array<std::uint64_t, 3> phase_records{};  // indexed by Phase
    std::array<std::uint64_t, 3> phase_bytes{};

    std::uint64_t issuer_storage_bytes = 0;
    std::uint64_t holder_storage_bytes = 0;  // all holders
    std::uint64_t holder_storage_max = 0;
    std::uint64_t verifier_storage_bytes = 0;
    std::uint64_t registry_storage_bytes = 0;

    std::uint64_t sync_attempts = 0;
    std::uint64_t sync_updates = 0;
    std::uint64_t sync_failures = 0;
    std::uint64_t sync_download_bytes = 0;  // everything holders received in the revocation phase
    std::uint64_t syncing_holders = 0;      // holders that received anything in the revocation phase
    std::uint64_t artifact_bytes_max = 0;   // largest artifact handed out at issuance
    std::uint64_t refresh_payload_min = 0;
    std::uint64_t refresh_payload_max = 0;
    std::uint64_t publication_bytes_max = 0;

    std::uint64_t verifications = 0;
    std::uint64_t verifications_valid = 0;
    std::uint64_t verification_issuer_contacts = 0;  // verifications that reached the issuer
    std::uint64_t verification_issuer_records = 0;   // verification-phase ledger records touching the issuer
    std::uint64_t presentation_bytes = 0;
    std::uint64_t status_query_bytes = 0;
    std::uint64_t status_query_bytes_max = 0;

    OpCounters ops;
    std::uint64_t audit_violations = 0;

    double mean_holder_sync_bytes() const {
        return syncing_holders == 0 ? 0.0 : static_cast<double>(sync_download_bytes) / syncing_holders;
    }

    /// Stable (name, value) list; the CSV and JSON exports follow this order.
    std::vector<std::pair<std::string, std::string>> fields() const;
};

/// Column header matching Metrics::fields().
std::string metrics_csv_header();
std::string metrics_csv_row(const Metrics& m);
std::string metrics_to_json(const std::vector<Metrics>& rows);

/// Wall-clock seconds per operation class. Not part of Metrics.
struct Timings {
    double issue = 0;
    double revoke = 0;
    double publish = 0;
    double sync = 0;
    double verify = 0;
};

class Simulation {
public:
    explicit Simulation(Scenario scenario);
    ~Simulation();
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    const Scenario& scenario() const { return sc_; }
    LogicalTime now() const;

    /// Generated run or the scripted events, whichever the scenario holds.
    void run();
    void apply(const ScriptEvent& ev);

    CredentialId issue(std::uint64_t holder);
    void revoke(std::uint64_t holder);
    /// Epoch boundary: clock tick, issuer publish, policy syncs.
    void advance();
    SyncStatus sync(std::uint64_t holder);
    VerifyOutcome verify(std::uint64_t holder, std::uint32_t verifier);
    /// Verifier re-evaluates its `index`-th retained presentation now.
    std::optional<bool> recheck(std::uint32_t verifier, std::size_t index);
    /// Status lookup by credential id from a verifier that never met the holder.
    std::optional<bool> outsider_status(std::uint64_t holder);

    bool has_credential(std::uint64_t holder) const;
    CredentialId credential_id(std::uint64_t holder) const;
    Digest artifact_digest(std::uint64_t holder) const;
    const HolderAgent& holder(std::uint64_t index) const;
    const IssuerAgent& issuer() const;

    const Ledger& ledger() const;
    const std::vector<VerificationRecord>& verifications() const { return verifications_; }
    const std::vector<SyncRecord>& syncs() const { return syncs_; }
    Metrics metrics() const;
    const Timings& timings() const { return timings_; }
    std::uint64_t audit_violations() const { return audit_violations_; }

private:
    struct Impl;
    struct AuditScope;
    std::unique_ptr<Impl> impl_;
    Scenario sc_;
    std::vector<VerificationRecord> verifications_;
    std::vector<SyncRecord> syncs_;
    Timings timings_;
    std::uint64_t audit_violations_ = 0;
};

struct RunResult {
    Ledger ledger;
    Metrics metrics;
    std::vector<VerificationRecord> verifications;
    Timings timings;
};

/// Throws ConfigError for invalid scenarios.
RunResult run_scenario(const Scenario& scenario);

}  // namespace revoc
