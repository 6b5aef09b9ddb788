#pragma once

// Privacy probes. Each aspect is decided from what an observer could actually
// see: ledger records (headers and retained payloads) and verifier behaviour
// through public interfaces.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "revoc/sim/simulation.hpp"

namespace revoc {

/// Table cell for an aspect. Depends = yes with stable ids, no with pairwise ids.
enum class Aspect : std::uint8_t { No, Yes, Depends };
std::string_view to_string(Aspect a);  // "n", "y", "y-n"

enum class PrivacyLevel : std::uint8_t { Full, Semi, None };
std::string_view to_string(PrivacyLevel l);  // "Full Privacy", "Semi Privacy", "No Privacy"

/// Everything a verifier received from one holder in one presentation.
struct PresentationTranscript {
    std::uint32_t verifier = 0;
    std::uint64_t epoch = 0;
    Bytes received;
};

/// Presentation payloads sent by `holder`. Needs a ledger with retained payloads.
std::vector<PresentationTranscript> transcripts_of(const Ledger& ledger, std::uint32_t holder);

inline constexpr std::size_t kCorrelationWindow = 16;

/// True iff some window of `window` bytes occurs in every transcript of
/// `same_holder` and in none of `control`, and none of its bytes belongs to a
/// half-window shared with `control` (framing). Throws Incomplete unless
/// `same_holder` spans at least two verifiers.
bool probe_correlation(const std::vector<PresentationTranscript>& same_holder,
                       const std::vector<PresentationTranscript>& control, std::size_t window = kCorrelationWindow);

/// True iff verification-phase traffic reaches the issuer.
bool probe_transaction_data(const Ledger& ledger);
/// True iff such traffic comes straight from a verifier, so the issuer learns who checked.
bool transaction_data_attributed(const Ledger& ledger);

/// Raw observations; unset fields mean "not decided".
struct PrivacyAspects {
    std::optional<bool> correlation;
    std::optional<bool> linkage;
    std::optional<bool> transaction_data;
    std::optional<bool> attributed;    // transaction data names the verifier
    std::optional<bool> unrestricted;  // anyone can look up status from the id alone
};

struct PrivacyReport {
    Aspect correlation = Aspect::No;
    Aspect linkage = Aspect::No;
    Aspect transaction_data = Aspect::No;
    PrivacyLevel holder_issuer = PrivacyLevel::Full;
    PrivacyLevel holder_verifier = PrivacyLevel::Full;

    bool operator==(const PrivacyReport&) const = default;
};

/// Pure function of the aspects. Throws Incomplete if any is undecided.
PrivacyReport classify_levels(const PrivacyAspects& aspects);

struct MethodPrivacy {
    MethodKind method = MethodKind::SimpleList;
    IdMode mode = IdMode::Stable;
    PrivacyAspects aspects;
    PrivacyReport report;
    std::uint64_t escalations = 0;  // verification-phase issuer contacts in the probe
    /// Same decisions when the ledger is cut down to each observer's own view.
    bool redacted_agrees = false;
};

/// Probe run: target and control present to two verifiers, the target is
/// revoked and presents once more, then verifiers re-evaluate later without
/// the holders and an outsider looks both up by id.
Scenario privacy_probe_scenario(MethodKind m, IdMode mode, std::uint64_t seed, const MethodParams& params);
MethodPrivacy probe_method(MethodKind m, IdMode mode, std::uint64_t seed = 11, const MethodParams& params = {});

struct GroupPrivacy {
    MethodGroup group = MethodGroup::ListBased;
    PrivacyReport report;
    std::vector<MethodPrivacy> runs;  // every method of the group in both modes
};

/// Merges a stable-mode and a pairwise-mode aspect into one cell.
Aspect combine_modes(bool stable, bool pairwise);

/// Group rows: aspects combined over both id modes, worst case across the
/// group's methods; levels from the pairwise runs.
std::vector<GroupPrivacy> privacy_table(std::uint64_t seed = 11, const MethodParams& params = {});

/// Same, but every cell from one id mode only.
std::vector<GroupPrivacy> privacy_table_for_mode(IdMode mode, std::uint64_t seed = 11,
                                                 const MethodParams& params = {});

}  // namespace revoc
