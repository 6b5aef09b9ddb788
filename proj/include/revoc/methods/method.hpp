#pragma once

// Common interface for revocation methods.
//
// A method is split into three agents, one per role. Agents never share
// state: everything they exchange goes through a Channel, which records it on
// the ledger first.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "revoc/accumulators/capabilities.hpp"
#include "revoc/accumulators/rsa_accumulator.hpp"
#include "revoc/core/credential.hpp"
#include "revoc/core/presentation_sealer.hpp"
#include "revoc/core/serialization.hpp"
#include "revoc/sim/network.hpp"

namespace revoc {

enum class MethodKind : std::uint8_t {
    SimpleList,
    HiddenList,
    CompressedBitList,
    BloomList,
    RsaAccumulator,
    MerkleAccumulator,
    CredentialUpdate,
    Lvvc,
};

/// Command-line name, e.g. "bloom-list".
std::string_view to_string(MethodKind m);
/// Throws ConfigError for unknown names.
MethodKind parse_method(std::string_view name);
const std::vector<MethodKind>& all_methods();

enum class MethodGroup : std::uint8_t {
    ListBased,
    ListBasedHidden,
    CompressedList,
    CryptographicAccumulators,
    CredentialUpdate,
    Lvvc,
};

std::string_view to_string(MethodGroup g);
const std::vector<MethodGroup>& all_groups();
std::vector<MethodKind> methods_in(MethodGroup g);

enum class ScalingClass : std::uint8_t { Constant, Sublinear, Linear, Superlinear };
std::string_view to_string(ScalingClass c);

struct RoleSet {
    bool issuer = false;
    bool holder = false;
    bool verifier = false;

    bool operator==(const RoleSet&) const = default;
    /// "I H V" style, blanks for absent roles.
    std::string str() const;
};

struct InteractionPattern {
    RoleSet issuance;
    RoleSet revocation;
    RoleSet verification;

    bool operator==(const InteractionPattern&) const = default;
};

struct MethodInfo {
    MethodKind kind;
    MethodGroup group;
    MethodCapabilities caps;
    InteractionPattern declared;
    bool calls_home;               // verifier contacts the issuer on every verification
    bool freshness_based;          // validity carried by a short-lived artifact
    bool pairwise_capable;         // presentation can hide the credential id
    bool credential_is_artifact;   // the base credential itself is refreshed
    ScalingClass scaling;          // declared growth of `scaling_series` with N
    std::string_view scaling_series;
};

const MethodInfo& method_info(MethodKind m);

struct MethodParams {
    CryptoProfile profile = CryptoProfile::Toy;
    IdMode id_mode = IdMode::Stable;
    std::uint64_t max_age = 1;         // verifier freshness window, epochs
    std::uint64_t capacity = 0;        // status list size (bit list)
    std::uint64_t bloom_bits = 9585;
    std::uint32_t bloom_hashes = 7;
    bool trapdoor = false;             // RSA deletion through the factorisation

    bool operator==(const MethodParams&) const = default;
};

enum class VerifyReason : std::uint8_t {
    Ok,
    Malformed,
    BadSignature,   // credential or artifact signature invalid
    BadBinding,     // holder binding or nonce mismatch
    Revoked,        // status source says revoked
    NotMember,      // witness / path does not verify
    Stale,          // freshness window exceeded
    Link,           // artifact belongs to another credential
    AccessDenied,   // status source refused the query
};

std::string_view to_string(VerifyReason r);

struct VerifyOutcome {
    bool valid = false;
    bool issuer_contacted = false;
    std::uint64_t bytes_queried = 0;
    VerifyReason reason = VerifyReason::Malformed;
};

enum class SyncStatus : std::uint8_t { Skipped, Updated, Failed };

/// Presentation envelope. In pairwise mode the body is sealed and `clear`
/// starts with a per-presentation alias.
struct Presentation {
    MethodKind method = MethodKind::SimpleList;
    LogicalTime epoch;
    Bytes nonce;
    Bytes clear;
    bool sealed = false;
    Bytes body;

    Bytes serialize() const;
    static Presentation parse(ByteView data);
};

/// Plaintext of a presentation body.
struct ProofBody {
    Bytes credential;
    Bytes material;
    Signature binding{};

    Bytes serialize() const;
    static ProofBody parse(ByteView data);
};

class IssuerAgent;

/// Shared plumbing for a scenario. Owned by the harness.
struct Services {
    Network& net;
    PublicBoard& board;
    const KeyRegistry& keys;
    const PresentationSealer& sealer;
    const MethodParams& params;
    IssuerAgent* issuer = nullptr;
};

inline constexpr ActorRef kIssuerRef{Role::Issuer, 0};
inline constexpr ActorRef kRegistryRef{Role::Registry, 0};

/// One actor's handle on the network.
class Channel {
public:
    Channel(Services& services, ActorRef self) : s_(services), self_(self) {}

    ActorRef self() const { return self_; }
    LogicalTime now() const { return s_.net.now(); }
    const MethodParams& params() const { return s_.params; }
    const KeyRegistry& keys() const { return s_.keys; }
    const PresentationSealer& sealer() const { return s_.sealer; }
    PublicBoard& board() { return s_.board; }

    Bytes call_issuer(Phase phase, Topic request_topic, ByteView request, Topic response_topic);
    /// Read from a registry entry. Throws NotPresent if the entry does not exist.
    Bytes read_registry(Phase phase, const std::string& key, ByteView request);
    /// Records an issuer -> registry publication; the caller then updates the entry.
    void publish(Phase phase, ByteView wire);
    void send(ActorRef to, Phase phase, Topic topic, ByteView payload);
    void note_local(Phase phase, Topic topic);

private:
    Services& s_;
    ActorRef self_;
};

struct TransactionEntry {
    ActorRef caller;
    std::optional<CredentialId> credential;  // unknown for snapshot downloads
    std::uint64_t epoch = 0;
};

struct IssueResult {
    Credential credential;
    std::optional<Bytes> artifact;
};

class IssuerAgent {
public:
    IssuerAgent(Issuer identity, const MethodParams& params) : identity_(std::move(identity)), params_(params) {}
    virtual ~IssuerAgent() = default;

    const Issuer& identity() const { return identity_; }

    /// Issues a credential; additions take effect immediately.
    IssueResult issue(const HolderId& holder, ClaimMap claims, Channel& ch);
    /// Marks a credential revoked. Takes effect at the next publish().
    /// Throws NotMember for unknown ids; revoking twice is a no-op.
    void revoke(const CredentialId& id, Channel& ch);
    /// Epoch boundary: pending revocations become effective.
    void publish(Channel& ch);

    /// Service endpoint for holders and verifiers.
    virtual Bytes handle(Topic topic, ByteView request, ActorRef caller, LogicalTime now);

    bool is_known(const CredentialId& id) const { return entries_.contains(id); }
    bool is_revoked(const CredentialId& id) const;  // published state
    const std::vector<TransactionEntry>& transaction_log() const { return tx_log_; }

    Bytes serialize_state() const;

protected:
    struct Entry {
        std::uint64_t ordinal = 0;
        HolderId holder;
        bool revoke_pending = false;
        bool revoked = false;
    };

    virtual ClaimMap extra_claims(std::uint64_t) { return {}; }
    virtual std::optional<Bytes> on_issue(const Credential&, const Entry&, Channel&) { return std::nullopt; }
    virtual void on_publish(const std::vector<CredentialId>& newly_revoked, Channel& ch) = 0;
    virtual void append_state(Writer& w) const = 0;

    const Entry& entry(const CredentialId& id) const;
    void log_transaction(ActorRef caller, std::optional<CredentialId> id, LogicalTime now) {
        tx_log_.push_back({caller, id, now.epoch});
    }
    /// Verifies a holder signature over `message` for the holder of `id`.
    /// Throws Unauthorized.
    void require_holder_signature(const CredentialId& id, ByteView message, ByteView signature) const;
    /// Per-credential secret derived from the issuer key.
    Digest credential_secret(std::string_view label, const CredentialId& id) const;

    Issuer identity_;
    const MethodParams& params_;

private:
    std::map<CredentialId, Entry> entries_;
    std::vector<CredentialId> pending_;
    std::vector<TransactionEntry> tx_log_;
};

class HolderAgent {
public:
    HolderAgent(MethodKind method, SigningKey key, Digest secret, const MethodParams& params)
        : method_(method), key_(std::move(key)), secret_(secret), params_(params) {}
    virtual ~HolderAgent() = default;

    HolderId id() const { return HolderId::from(key_.public_key()); }
    bool has_credential() const { return credential_.has_value(); }
    const Credential& credential() const;

    void accept(Credential vc, std::optional<Bytes> artifact);

    /// Brings the revocation artifact up to date. Failure leaves the old artifact.
    virtual SyncStatus sync(Channel& ch) = 0;
    /// Whether a sync before presenting could change the artifact.
    virtual bool needs_sync(LogicalTime now) const = 0;

    Bytes present(ByteView nonce, Channel& ch);

    /// Digest of the current revocation artifact (empty input when none).
    Digest artifact_digest() const;
    Bytes serialize_state() const;

    SyncStatus last_sync() const { return last_sync_; }

protected:
    virtual void on_accept(std::optional<Bytes> artifact) { (void)artifact; }
    /// Clear-text extras (tokens, escalation signatures) sent beside the body.
    virtual Bytes clear_extras(ByteView nonce, Channel& ch) {
        (void)nonce;
        (void)ch;
        return {};
    }
    virtual Bytes material(ByteView nonce, Channel& ch) {
        (void)nonce;
        (void)ch;
        return {};
    }
    virtual Bytes artifact_bytes() const { return {}; }

    Signature sign(std::string_view label, std::initializer_list<ByteView> parts) const;

    MethodKind method_;
    SigningKey key_;
    Digest secret_;
    const MethodParams& params_;
    std::optional<Credential> credential_;
    SyncStatus last_sync_ = SyncStatus::Skipped;
};

/// Holder signature over a tagged message, shared by holders and the issuer check.
Bytes holder_message(std::string_view label, std::initializer_list<ByteView> parts);

/// What a verifier extracted from a presentation.
struct OpenedPresentation {
    Presentation envelope;
    Credential credential;
    Bytes material;
    Bytes extras;  // clear part without the alias
};

class VerifierAgent {
public:
    VerifierAgent(MethodKind method, const MethodParams& params) : method_(method), params_(params) {}
    virtual ~VerifierAgent() = default;

    /// Full verification; the presentation is retained afterwards.
    VerifyOutcome verify(ByteView presentation, ByteView nonce, Channel& ch);

    /// Re-evaluates a retained presentation at the current epoch without the
    /// holder. nullopt if the status source refuses.
    std::optional<bool> recheck(std::size_t retained_index, Channel& ch);
    std::size_t retained_count() const { return retained_.size(); }

    /// Status of a credential from its id alone, through public interfaces.
    /// nullopt when that is not possible.
    virtual std::optional<bool> status_by_id(const CredentialId& id, Channel& ch) {
        (void)id;
        (void)ch;
        return std::nullopt;
    }

    Bytes serialize_state() const;

protected:
    struct Status {
        bool valid = false;
        VerifyReason reason = VerifyReason::Ok;
        bool issuer_contacted = false;
        std::uint64_t bytes_queried = 0;
    };

    virtual Status check_status(const OpenedPresentation& p, Channel& ch) = 0;
    virtual void append_state(Writer& w) const { (void)w; }

    MethodKind method_;
    const MethodParams& params_;

private:
    struct Retained {
        Bytes nonce;
        Bytes presentation;
    };

    std::optional<OpenedPresentation> open(ByteView presentation, ByteView nonce, bool check_epoch, Channel& ch,
                                           VerifyReason& reason) const;

    std::vector<Retained> retained_;
};

std::unique_ptr<IssuerAgent> make_issuer(MethodKind m, Issuer identity, const MethodParams& params);
std::unique_ptr<HolderAgent> make_holder(MethodKind m, SigningKey key, Digest secret, const MethodParams& params);
std::unique_ptr<VerifierAgent> make_verifier(MethodKind m, const MethodParams& params);

}  // namespace revoc
