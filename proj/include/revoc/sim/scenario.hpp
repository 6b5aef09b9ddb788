#pragma once

// Scenario description. A scenario is fully determined by this struct, and
// the struct round-trips through its JSON form.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "revoc/methods/method.hpp"

namespace revoc {

enum class SyncPolicyKind : std::uint8_t {
    Eager,     // every holder syncs at every epoch boundary and before presenting
    Sampled,   // `sample` evenly spaced holders sync at boundaries; everyone before presenting
    OnDemand,  // holders sync only right before presenting
    Manual,    // only explicit Sync events
};

struct SyncPolicy {
    SyncPolicyKind kind = SyncPolicyKind::Eager;
    std::uint32_t sample = 0;

    bool syncs_before_presenting() const { return kind != SyncPolicyKind::Manual; }
    bool operator==(const SyncPolicy&) const = default;
};

/// "eager", "sampled:K", "on_demand", "manual".
std::string to_string(const SyncPolicy& p);
SyncPolicy parse_sync_policy(std::string_view text);

enum class EventKind : std::uint8_t { Issue, Revoke, Sync, Verify, Advance };
std::string_view to_string(EventKind k);

struct ScriptEvent {
    EventKind kind = EventKind::Advance;
    std::uint64_t holder = 0;
    std::uint32_t verifier = 0;

    bool operator==(const ScriptEvent&) const = default;
};

/// Timed events for generated runs: `per_epoch` random picks per epoch, plus
/// explicit (epoch, holder[, verifier]) entries.
struct Schedule {
    std::uint64_t per_epoch = 0;
    struct Entry {
        std::uint64_t epoch = 0;
        std::uint64_t holder = 0;
        std::uint32_t verifier = 0;
        bool operator==(const Entry&) const = default;
    };
    std::vector<Entry> entries;

    bool operator==(const Schedule&) const = default;
};

struct Scenario {
    MethodKind method = MethodKind::SimpleList;
    std::uint64_t population = 10;  // holders, one credential each
    std::uint64_t epochs = 4;
    std::uint64_t seed = 1;
    std::uint32_t verifiers = 2;
    SyncPolicy sync;
    Schedule revocations;
    Schedule verifications;
    /// When non-empty, replaces the generated run (no automatic issuance).
    std::vector<ScriptEvent> script;
    MethodParams params;
    std::uint32_t claim_count = 4;
    bool retain_payloads = false;
    bool audit = false;  // check every state change against the ledger

    bool operator==(const Scenario& o) const;

    /// Throws ConfigError.
    void validate() const;
};

Scenario parse_scenario(std::string_view json_text);
std::string scenario_to_json(const Scenario& s);

}  // namespace revoc
