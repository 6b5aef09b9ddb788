#include "revoc/sim/ledger.hpp"

#include <sstream>

#include "revoc/core/hash.hpp"
#include "revoc/core/serialization.hpp"

namespace revoc {

std::string_view to_string(Role r) {
    switch (r) {
        case Role::Issuer: return "issuer";
        case Role::Holder: return "holder";
        case Role::Verifier: return "verifier";
        case Role::Registry: return "registry";
    }
    return "?";
}

char role_letter(Role r) {
    switch (r) {
        case Role::Issuer: return 'I';
        case Role::Holder: return 'H';
        case Role::Verifier: return 'V';
        case Role::Registry: return 'R';
    }
    return '?';
}

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Issuance: return "issuance";
        case Phase::Revocation: return "revocation";
        case Phase::Verification: return "verification";
    }
    return "?";
}

std::string_view to_string(Topic t) {
    switch (t) {
        case Topic::CredentialDelivery: return "credential_delivery";
        case Topic::RevocationArtifact: return "revocation_artifact";
        case Topic::LocalUpdate: return "local_update";
        case Topic::Publication: return "publication";
        case Topic::SyncRequest: return "sync_request";
        case Topic::SyncResponse: return "sync_response";
        case Topic::StatusQuery: return "status_query";
        case Topic::StatusResponse: return "status_response";
        case Topic::TokenRequest: return "token_request";
        case Topic::TokenResponse: return "token_response";
        case Topic::PresentationRequest: return "presentation_request";
        case Topic::Presentation: return "presentation";
        case Topic::RegistryRead: return "registry_read";
        case Topic::RegistryResponse: return "registry_response";
        case Topic::RefreshRequest: return "refresh_request";
        case Topic::RefreshResponse: return "refresh_response";
    }
    return "?";
}

std::string to_string(const ActorRef& a) {
    return std::string(to_string(a.role)) + "#" + std::to_string(a.index);
}

const LedgerRecord& Ledger::append(LedgerRecord record) {
    record.seq = records_.size();
    records_.push_back(std::move(record));
    return records_.back();
}

std::uint64_t Ledger::total_payload_bytes() const {
    std::uint64_t total = 0;
    for (const auto& r : records_) {
        total += r.payload_bytes;
    }
    return total;
}

Ledger Ledger::view_of(const ActorRef& actor) const {
    Ledger out;
    for (const auto& r : records_) {
        if (r.involves(actor)) {
            out.records_.push_back(r);
        }
    }
    return out;
}

Bytes Ledger::serialize() const {
    Writer w;
    w.tag('G').u64(records_.size());
    for (const auto& r : records_) {
        w.raw_u64(r.seq)
            .raw_u64(r.epoch)
            .raw_u64(r.scenario_seed)
            .raw_u64(r.payload_bytes)
            .raw_u64(r.from.index)
            .raw_u64(r.to.index);
        const std::uint8_t small[] = {static_cast<std::uint8_t>(r.phase), static_cast<std::uint8_t>(r.from.role),
                                      static_cast<std::uint8_t>(r.to.role), static_cast<std::uint8_t>(r.topic),
                                      static_cast<std::uint8_t>(r.error ? 1 : 0)};
        w.raw(small);
    }
    return std::move(w).take();
}

Digest Ledger::digest() const {
    return sha256(serialize());
}

std::string Ledger::to_csv() const {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const auto& r : records_) {
        out << r.seq << ',' << r.epoch << ',' << to_string(r.phase) << ',' << to_string(r.from.role) << ','
            << r.from.index << ',' << to_string(r.to.role) << ',' << r.to.index << ',' << to_string(r.topic) << ','
            << r.payload_bytes << ',' << (r.error ? 1 : 0) << ',' << r.scenario_seed << '\n';
    }
    return out.str();
}

}  // namespace revoc
