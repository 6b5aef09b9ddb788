#pragma once

// Append-only record of every message that crosses a role boundary.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "revoc/core/bytes.hpp"

namespace revoc {

enum class Role : std::uint8_t {
    Issuer,
    Holder,
    Verifier,
    Registry,  // public trust layer (ledger / DPKI); not one of the three roles
};

enum class Phase : std::uint8_t { Issuance, Revocation, Verification };

enum class Topic : std::uint8_t {
    CredentialDelivery,  // the base credential itself
    RevocationArtifact,  // witness, path, LVVC or re-issued credential handed out at issuance
    LocalUpdate,         // issuer-internal state change
    Publication,         // issuer -> registry
    SyncRequest,
    SyncResponse,
    StatusQuery,
    StatusResponse,
    TokenRequest,
    TokenResponse,
    PresentationRequest,
    Presentation,
    RegistryRead,
    RegistryResponse,
    RefreshRequest,
    RefreshResponse,
};

std::string_view to_string(Role r);
std::string_view to_string(Phase p);
std::string_view to_string(Topic t);
char role_letter(Role r);

struct ActorRef {
    Role role = Role::Issuer;
    std::uint32_t index = 0;

    bool operator==(const ActorRef&) const = default;
    auto operator<=>(const ActorRef&) const = default;
};

std::string to_string(const ActorRef& a);

struct LedgerRecord {
    std::uint64_t seq = 0;
    ActorRef from;
    ActorRef to;
    Phase phase = Phase::Issuance;
    Topic topic = Topic::LocalUpdate;
    std::uint64_t payload_bytes = 0;
    std::uint64_t epoch = 0;
    std::uint64_t scenario_seed = 0;
    bool error = false;
    Bytes payload;  // retained only when the network is asked to keep transcripts

    bool is_local() const { return from == to; }
    bool involves(const ActorRef& a) const { return from == a || to == a; }
    bool involves(Role r) const { return from.role == r || to.role == r; }
};

class Ledger {
public:
    const LedgerRecord& append(LedgerRecord record);

    const std::vector<LedgerRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    std::uint64_t total_payload_bytes() const;

    /// Records visible to one actor (sent, received or local).
    Ledger view_of(const ActorRef& actor) const;

    /// Canonical binary encoding of all record headers (payload contents excluded).
    Bytes serialize() const;
    Digest digest() const;

    static constexpr std::string_view kCsvHeader =
        "seq,epoch,phase,from_role,from_index,to_role,to_index,topic,payload_bytes,error,scenario_seed";
    std::string to_csv() const;

private:
    std::vector<LedgerRecord> records_;
};

}  // namespace revoc
