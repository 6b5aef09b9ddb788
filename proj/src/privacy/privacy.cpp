#include "revoc/privacy/privacy.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "revoc/core/errors.hpp"

namespace revoc {

std::string_view to_string(Aspect a) {
    switch (a) {
        case Aspect::No: return "n";
        case Aspect::Yes: return "y";
        case Aspect::Depends: return "y-n";
    }
    return "?";
}

std::string_view to_string(PrivacyLevel l) {
    switch (l) {
        case PrivacyLevel::Full: return "Full Privacy";
        case PrivacyLevel::Semi: return "Semi Privacy";
        case PrivacyLevel::None: return "No Privacy";
    }
    return "?";
}

std::vector<PresentationTranscript> transcripts_of(const Ledger& ledger, std::uint32_t holder) {
    std::vector<PresentationTranscript> out;
    for (const auto& r : ledger.records()) {
        if (r.topic != Topic::Presentation || r.from != ActorRef{Role::Holder, holder} ||
            r.to.role != Role::Verifier || r.error) {
            continue;
        }
        if (r.payload.size() != r.payload_bytes) {
            throw Error(ErrorCode::Incomplete, "ledger was recorded without payloads");
        }
        out.push_back({r.to.index, r.epoch, r.payload});
    }
    return out;
}

namespace {

std::set<std::string> windows(const Bytes& b, std::size_t w) {
    std::set<std::string> out;
    for (std::size_t i = 0; i + w <= b.size(); ++i) {
        out.emplace(reinterpret_cast<const char*>(b.data()) + i, w);
    }
    return out;
}

}  // namespace

bool probe_correlation(const std::vector<PresentationTranscript>& same_holder,
                       const std::vector<PresentationTranscript>& control, std::size_t window) {
    std::set<std::uint32_t> verifiers;
    for (const auto& t : same_holder) verifiers.insert(t.verifier);
    if (verifiers.size() < 2) {
        throw Error(ErrorCode::Incomplete, "correlation needs transcripts from two verifiers");
    }
    // Bytes that also show up in the control holder's transcripts are framing
    // (tags, lengths, epochs). A token must not touch any of them, otherwise a
    // single coincidental byte next to framing would count as an identifier.
    const std::size_t half = std::max<std::size_t>(1, window / 2);
    std::set<std::string> control_half;
    for (const auto& t : control) control_half.merge(windows(t.received, half));
    const Bytes& first = same_holder.front().received;
    std::vector<bool> framing(first.size(), false);
    for (std::size_t i = 0; i + half <= first.size(); ++i) {
        if (control_half.contains(std::string(reinterpret_cast<const char*>(first.data()) + i, half))) {
            std::fill(framing.begin() + static_cast<std::ptrdiff_t>(i),
                      framing.begin() + static_cast<std::ptrdiff_t>(i + half), true);
        }
    }
    std::set<std::string> common;
    for (std::size_t i = 0; i + window <= first.size(); ++i) {
        const auto begin = framing.begin() + static_cast<std::ptrdiff_t>(i);
        const auto end = begin + static_cast<std::ptrdiff_t>(window);
        if (std::find(begin, end, true) == end) {
            common.emplace(reinterpret_cast<const char*>(first.data()) + i, window);
        }
    }
    for (std::size_t i = 1; i < same_holder.size() && !common.empty(); ++i) {
        const auto next = windows(same_holder[i].received, window);
        std::set<std::string> kept;
        for (const auto& s : common) {
            if (next.contains(s)) kept.insert(s);
        }
        common = std::move(kept);
    }
    for (const auto& t : control) {
        if (common.empty()) break;
        for (const auto& s : windows(t.received, window)) common.erase(s);
    }
    return !common.empty();
}

bool probe_transaction_data(const Ledger& ledger) {
    for (const auto& r : ledger.records()) {
        if (r.phase == Phase::Verification && r.involves(Role::Issuer)) return true;
    }
    return false;
}

bool transaction_data_attributed(const Ledger& ledger) {
    for (const auto& r : ledger.records()) {
        if (r.phase != Phase::Verification || !r.involves(Role::Issuer)) continue;
        if (r.from.role == Role::Verifier || r.to.role == Role::Verifier) return true;
    }
    return false;
}

PrivacyReport classify_levels(const PrivacyAspects& a) {
    if (!a.correlation || !a.linkage || !a.transaction_data || !a.attributed || !a.unrestricted) {
        throw Error(ErrorCode::Incomplete, "privacy aspects not fully decided");
    }
    PrivacyReport r;
    r.correlation = *a.correlation ? Aspect::Yes : Aspect::No;
    r.linkage = *a.linkage ? Aspect::Yes : Aspect::No;
    r.transaction_data = *a.transaction_data ? Aspect::Yes : Aspect::No;

    if (!*a.transaction_data) {
        r.holder_issuer = PrivacyLevel::Full;
    } else {
        r.holder_issuer = *a.attributed ? PrivacyLevel::None : PrivacyLevel::Semi;
    }

    if (*a.unrestricted) {
        r.holder_verifier = PrivacyLevel::None;
    } else if (*a.transaction_data) {
        // verification leans on a third party that sees the check
        r.holder_verifier = PrivacyLevel::Semi;
    } else if (!*a.correlation && !*a.linkage) {
        r.holder_verifier = PrivacyLevel::Full;
    } else {
        r.holder_verifier = PrivacyLevel::Semi;
    }
    return r;
}

namespace {

constexpr std::uint32_t kTarget = 0;
constexpr std::uint32_t kControl = 1;

Ledger verifier_views(const Ledger& full, std::uint32_t verifiers) {
    Ledger merged;
    for (std::uint32_t v = 0; v < verifiers; ++v) {
        const Ledger view = full.view_of({Role::Verifier, v});
        for (const auto& r : view.records()) merged.append(r);
    }
    return merged;
}

struct Decided {
    bool correlation;
    bool transaction_data;
    bool attributed;
    bool operator==(const Decided&) const = default;
};

Decided decide_from(const Ledger& issuer_side, const Ledger& verifier_side) {
    std::vector<PresentationTranscript> target, control;
    // presentations made before the revocation, one per verifier
    for (auto& t : transcripts_of(verifier_side, kTarget)) {
        if (t.epoch == 1) target.push_back(std::move(t));
    }
    for (auto& t : transcripts_of(verifier_side, kControl)) {
        if (t.epoch == 1) control.push_back(std::move(t));
    }
    return {probe_correlation(target, control), probe_transaction_data(issuer_side),
            transaction_data_attributed(issuer_side)};
}

}  // namespace

Scenario privacy_probe_scenario(MethodKind m, IdMode mode, std::uint64_t seed, const MethodParams& params) {
    Scenario s;
    s.method = m;
    s.population = 4;
    s.verifiers = 2;
    s.seed = seed;
    s.sync = {SyncPolicyKind::Eager, 0};
    s.params = params;
    s.params.id_mode = mode;
    s.retain_payloads = true;
    for (std::uint64_t h = 0; h < s.population; ++h) s.script.push_back({EventKind::Issue, h, 0});
    s.script.push_back({EventKind::Advance, 0, 0});
    for (std::uint64_t h : {kTarget, kControl}) {
        s.script.push_back({EventKind::Verify, h, 0});
        s.script.push_back({EventKind::Verify, h, 1});
    }
    s.script.push_back({EventKind::Revoke, kTarget, 0});
    s.script.push_back({EventKind::Advance, 0, 0});
    s.script.push_back({EventKind::Verify, kTarget, 0});
    // move past every freshness window before the verifiers look again
    for (std::uint64_t i = 0; i <= params.max_age; ++i) s.script.push_back({EventKind::Advance, 0, 0});
    s.epochs = 3 + params.max_age;
    return s;
}

MethodPrivacy probe_method(MethodKind m, IdMode mode, std::uint64_t seed, const MethodParams& params) {
    Simulation sim(privacy_probe_scenario(m, mode, seed, params));
    sim.run();

    MethodPrivacy out;
    out.method = m;
    out.mode = mode;
    for (const auto& v : sim.verifications()) {
        if (v.outcome.issuer_contacted) ++out.escalations;
    }

    // Linkage: verifier 0 retained the target (index 0) and the control
    // (index 1) from epoch 1. It must get both right without the holders.
    const auto target_now = sim.recheck(0, 0);
    const auto control_now = sim.recheck(0, 1);
    out.aspects.linkage = target_now == false && control_now == true;

    const auto target_lookup = sim.outsider_status(kTarget);
    const auto control_lookup = sim.outsider_status(kControl);
    out.aspects.unrestricted = target_lookup == false && control_lookup == true;

    const auto& full = sim.ledger();
    const Decided whole = decide_from(full, full);
    const Decided redacted = decide_from(full.view_of(kIssuerRef), verifier_views(full, sim.scenario().verifiers));
    out.redacted_agrees = whole == redacted;
    out.aspects.correlation = whole.correlation;
    out.aspects.transaction_data = whole.transaction_data;
    out.aspects.attributed = whole.attributed;
    out.report = classify_levels(out.aspects);
    return out;
}

Aspect combine_modes(bool stable, bool pairwise) {
    if (stable == pairwise) return stable ? Aspect::Yes : Aspect::No;
    return stable ? Aspect::Depends : Aspect::Yes;
}

namespace {

int severity(Aspect a) {
    switch (a) {
        case Aspect::No: return 0;
        case Aspect::Depends: return 1;
        case Aspect::Yes: return 2;
    }
    return 2;
}

int severity(PrivacyLevel l) {
    return static_cast<int>(l);
}

template <typename T>
T worst(T a, T b) {
    return severity(b) > severity(a) ? b : a;
}

}  // namespace

std::vector<GroupPrivacy> privacy_table(std::uint64_t seed, const MethodParams& params) {
    std::vector<GroupPrivacy> rows;
    for (auto g : all_groups()) {
        GroupPrivacy row;
        row.group = g;
        bool first = true;
        for (auto m : methods_in(g)) {
            auto stable = probe_method(m, IdMode::Stable, seed, params);
            auto pairwise = probe_method(m, IdMode::Pairwise, seed, params);
            PrivacyReport r;
            r.correlation = combine_modes(*stable.aspects.correlation, *pairwise.aspects.correlation);
            r.linkage = combine_modes(*stable.aspects.linkage, *pairwise.aspects.linkage);
            r.transaction_data = combine_modes(*stable.aspects.transaction_data, *pairwise.aspects.transaction_data);
            r.holder_issuer = pairwise.report.holder_issuer;
            r.holder_verifier = pairwise.report.holder_verifier;
            if (first) {
                row.report = r;
                first = false;
            } else {
                row.report.correlation = worst(row.report.correlation, r.correlation);
                row.report.linkage = worst(row.report.linkage, r.linkage);
                row.report.transaction_data = worst(row.report.transaction_data, r.transaction_data);
                row.report.holder_issuer = worst(row.report.holder_issuer, r.holder_issuer);
                row.report.holder_verifier = worst(row.report.holder_verifier, r.holder_verifier);
            }
            row.runs.push_back(std::move(stable));
            row.runs.push_back(std::move(pairwise));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<GroupPrivacy> privacy_table_for_mode(IdMode mode, std::uint64_t seed, const MethodParams& params) {
    std::vector<GroupPrivacy> rows;
    for (auto g : all_groups()) {
        GroupPrivacy row;
        row.group = g;
        bool first = true;
        for (auto m : methods_in(g)) {
            auto run = probe_method(m, mode, seed, params);
            if (first) {
                row.report = run.report;
                first = false;
            } else {
                row.report.correlation = worst(row.report.correlation, run.report.correlation);
                row.report.linkage = worst(row.report.linkage, run.report.linkage);
                row.report.transaction_data = worst(row.report.transaction_data, run.report.transaction_data);
                row.report.holder_issuer = worst(row.report.holder_issuer, run.report.holder_issuer);
                row.report.holder_verifier = worst(row.report.holder_verifier, run.report.holder_verifier);
            }
            row.runs.push_back(std::move(run));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace revoc
