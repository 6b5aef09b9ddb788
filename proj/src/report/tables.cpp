#include "revoc/report/tables.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <json.hpp>

#include "revoc/core/errors.hpp"

namespace revoc {

using ojson = nlohmann::ordered_json;

OutputFormat parse_format(std::string_view text) {
    if (text == "table") return OutputFormat::Table;
    if (text == "csv") return OutputFormat::Csv;
    if (text == "json") return OutputFormat::Json;
    throw Error(ErrorCode::ConfigError, "unknown format '" + std::string(text) + "'");
}

namespace {

constexpr RoleSet kI{true, false, false};
constexpr RoleSet kIH{true, true, false};
constexpr RoleSet kIHV{true, true, true};
constexpr RoleSet kHV{false, true, true};

constexpr InteractionPattern kListRow{kI, kI, kIHV};
constexpr InteractionPattern kHolderRow{kIH, kIH, kHV};

std::size_t group_index(MethodGroup g) {
    return static_cast<std::size_t>(g);
}

std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string marks(const RoleSet& r) {
    std::string out;
    out += r.issuer ? "x  " : "   ";
    out += r.holder ? "x  " : "   ";
    out += r.verifier ? "x" : " ";
    return out;
}

ojson role_list(const RoleSet& r) {
    auto a = ojson::array();
    if (r.issuer) a.push_back("I");
    if (r.holder) a.push_back("H");
    if (r.verifier) a.push_back("V");
    return a;
}

std::string bit(bool b) {
    return b ? "1" : "0";
}

InteractionPattern merge(const InteractionPattern& a, const InteractionPattern& b) {
    auto u = [](const RoleSet& x, const RoleSet& y) {
        return RoleSet{x.issuer || y.issuer, x.holder || y.holder, x.verifier || y.verifier};
    };
    return {u(a.issuance, b.issuance), u(a.revocation, b.revocation), u(a.verification, b.verification)};
}

}  // namespace

const InteractionPattern& reference_interactions(MethodGroup g) {
    static const std::array<InteractionPattern, 6> kRows{kListRow, kListRow, kListRow, kHolderRow, kHolderRow, kHolderRow};
    return kRows.at(group_index(g));
}

const PrivacyReport& reference_privacy(MethodGroup g) {
    using A = Aspect;
    using L = PrivacyLevel;
    // correlation, linkage, transaction data, holder->issuer, holder->verifier
    static const std::array<PrivacyReport, 6> kRows{{
        {A::Yes, A::Yes, A::Yes, L::None, L::None},          // list based
        {A::Depends, A::Depends, A::Yes, L::None, L::Semi},  // hidden
        {A::Yes, A::Yes, A::Yes, L::None, L::Semi},          // compressed
        {A::Depends, A::No, A::No, L::Full, L::Full},        // accumulators
        {A::Depends, A::No, A::No, L::Full, L::Full},        // credential update
        {A::Depends, A::No, A::No, L::Full, L::Full},        // lvvc
    }};
    return kRows.at(group_index(g));
}

Aspect resolve_for_mode(Aspect reference, IdMode mode) {
    if (reference != Aspect::Depends) return reference;
    return mode == IdMode::Stable ? Aspect::Yes : Aspect::No;
}

// ------------------------------------------------------------- interactions

std::vector<InteractionRow> interaction_rows(const std::vector<MethodKind>& methods, const MethodParams& params) {
    std::vector<InteractionRow> rows;
    if (methods.size() == 1) {
        const auto m = methods.front();
        InteractionRow r;
        r.label = std::string(to_string(m));
        r.group = method_info(m).group;
        r.observed = interaction_matrix(m, params);
        r.matches = r.observed == reference_interactions(r.group);
        rows.push_back(std::move(r));
        return rows;
    }
    for (auto g : all_groups()) {
        std::vector<InteractionRow> variants;
        InteractionRow group_row;
        group_row.label = std::string(to_string(g));
        group_row.group = g;
        bool first = true;
        for (auto m : methods_in(g)) {
            if (std::find(methods.begin(), methods.end(), m) == methods.end()) continue;
            InteractionRow v;
            v.label = "  " + std::string(to_string(m));
            v.group = g;
            v.variant = true;
            v.observed = interaction_matrix(m, params);
            v.matches = v.observed == reference_interactions(g);
            group_row.observed = first ? v.observed : merge(group_row.observed, v.observed);
            first = false;
            variants.push_back(std::move(v));
        }
        if (first) continue;
        group_row.matches = group_row.observed == reference_interactions(g);
        rows.push_back(std::move(group_row));
        if (variants.size() > 1) {
            for (auto& v : variants) rows.push_back(std::move(v));
        }
    }
    return rows;
}

bool all_match(const std::vector<InteractionRow>& rows) {
    for (const auto& r : rows) {
        if (!r.matches) return false;
    }
    return !rows.empty();
}

std::string render_interactions(const std::vector<InteractionRow>& rows, OutputFormat f) {
    std::string out;
    switch (f) {
        case OutputFormat::Table: {
            out += pad("", 30) + "| Issuance  | Revocation | Verification |\n";
            out += pad("", 30) + "| I  H  V   | I  H  V    | I  H  V      | check\n";
            out += std::string(30, '-') + "+-----------+------------+--------------+------\n";
            for (const auto& r : rows) {
                out += pad(r.label, 30) + "| " + pad(marks(r.observed.issuance), 10) + "| " +
                       pad(marks(r.observed.revocation), 11) + "| " + pad(marks(r.observed.verification), 13) +
                       "| " + (r.matches ? "ok" : "MISMATCH") + "\n";
            }
            break;
        }
        case OutputFormat::Csv: {
            out += "label,group,variant,issuance_i,issuance_h,issuance_v,revocation_i,revocation_h,revocation_v,"
                   "verification_i,verification_h,verification_v,matches\n";
            for (const auto& r : rows) {
                std::string label = r.variant ? r.label.substr(2) : r.label;
                out += label + "," + std::string(to_string(r.group)) + "," + bit(r.variant);
                for (const auto* set : {&r.observed.issuance, &r.observed.revocation, &r.observed.verification}) {
                    out += "," + bit(set->issuer) + "," + bit(set->holder) + "," + bit(set->verifier);
                }
                out += "," + bit(r.matches) + "\n";
            }
            break;
        }
        case OutputFormat::Json: {
            ojson doc;
            doc["schema"] = "revoc.interactions/1";
            auto arr = ojson::array();
            for (const auto& r : rows) {
                ojson o;
                o["label"] = r.variant ? r.label.substr(2) : r.label;
                o["group"] = std::string(to_string(r.group));
                o["variant"] = r.variant;
                o["issuance"] = role_list(r.observed.issuance);
                o["revocation"] = role_list(r.observed.revocation);
                o["verification"] = role_list(r.observed.verification);
                o["matches"] = r.matches;
                arr.push_back(std::move(o));
            }
            doc["rows"] = std::move(arr);
            out = doc.dump(2) + "\n";
            break;
        }
    }
    return out;
}

// ------------------------------------------------------------------ privacy

namespace {

bool levels_match(const PrivacyReport& a, const PrivacyReport& b) {
    return a.holder_issuer == b.holder_issuer && a.holder_verifier == b.holder_verifier;
}

bool aspects_match_mode(const PrivacyReport& observed, const PrivacyReport& ref, IdMode mode) {
    return observed.transaction_data == resolve_for_mode(ref.transaction_data, mode) &&
           observed.correlation == resolve_for_mode(ref.correlation, mode) &&
           observed.linkage == resolve_for_mode(ref.linkage, mode);
}

/// Stable-mode levels are not part of the reference; only aspects are compared.
bool mode_row_matches(const PrivacyReport& observed, MethodGroup g, IdMode mode) {
    const auto& ref = reference_privacy(g);
    if (!aspects_match_mode(observed, ref, mode)) return false;
    return mode == IdMode::Stable || levels_match(observed, ref);
}

std::string cell(Aspect a) {
    if (a == Aspect::Depends) return "y-n (stable y, pairwise n)";
    return std::string(to_string(a));
}

}  // namespace

std::vector<PrivacyRow> privacy_rows(std::uint64_t seed, const MethodParams& params) {
    std::vector<PrivacyRow> rows;
    for (const auto& g : privacy_table(seed, params)) {
        rows.push_back({std::string(to_string(g.group)), g.group, "both", g.report,
                        g.report == reference_privacy(g.group)});
    }
    return rows;
}

std::vector<PrivacyRow> privacy_rows_for_mode(IdMode mode, std::uint64_t seed, const MethodParams& params) {
    std::vector<PrivacyRow> rows;
    for (const auto& g : privacy_table_for_mode(mode, seed, params)) {
        rows.push_back({std::string(to_string(g.group)), g.group, std::string(to_string(mode)), g.report,
                        mode_row_matches(g.report, g.group, mode)});
    }
    return rows;
}

std::vector<PrivacyRow> privacy_rows_for_method(MethodKind m, std::optional<IdMode> mode, std::uint64_t seed,
                                                const MethodParams& params) {
    std::vector<PrivacyRow> rows;
    const auto g = method_info(m).group;
    for (auto md : {IdMode::Stable, IdMode::Pairwise}) {
        if (mode && *mode != md) continue;
        const auto run = probe_method(m, md, seed, params);
        rows.push_back({std::string(to_string(m)), g, std::string(to_string(md)), run.report,
                        mode_row_matches(run.report, g, md)});
    }
    return rows;
}

bool all_match(const std::vector<PrivacyRow>& rows) {
    for (const auto& r : rows) {
        if (!r.matches) return false;
    }
    return !rows.empty();
}

std::string render_privacy(const std::vector<PrivacyRow>& rows, OutputFormat f) {
    std::string out;
    switch (f) {
        case OutputFormat::Table: {
            out += pad("Group", 28) + "| " + pad("Mode", 9) + "| " + pad("Transaction data", 27) + "| " +
                   pad("Holder->Issuer", 15) + "| " + pad("Correlation", 27) + "| " + pad("Linkage", 27) + "| " +
                   pad("Holder->Verifier", 17) + "| check\n";
            out += std::string(28, '-') + "+" + std::string(10, '-') + "+" + std::string(28, '-') + "+" +
                   std::string(16, '-') + "+" + std::string(28, '-') + "+" + std::string(28, '-') + "+" +
                   std::string(18, '-') + "+------\n";
            for (const auto& r : rows) {
                out += pad(r.label, 28) + "| " + pad(r.mode, 9) + "| " + pad(cell(r.observed.transaction_data), 27) +
                       "| " + pad(std::string(to_string(r.observed.holder_issuer)), 15) + "| " +
                       pad(cell(r.observed.correlation), 27) + "| " + pad(cell(r.observed.linkage), 27) + "| " +
                       pad(std::string(to_string(r.observed.holder_verifier)), 17) + "| " +
                       (r.matches ? "ok" : "MISMATCH") + "\n";
            }
            break;
        }
        case OutputFormat::Csv: {
            out += "label,group,mode,transaction_data,holder_issuer,correlation,linkage,holder_verifier,matches\n";
            for (const auto& r : rows) {
                out += r.label + "," + std::string(to_string(r.group)) + "," + r.mode + "," +
                       std::string(to_string(r.observed.transaction_data)) + "," +
                       std::string(to_string(r.observed.holder_issuer)) + "," +
                       std::string(to_string(r.observed.correlation)) + "," +
                       std::string(to_string(r.observed.linkage)) + "," +
                       std::string(to_string(r.observed.holder_verifier)) + "," + bit(r.matches) + "\n";
            }
            break;
        }
        case OutputFormat::Json: {
            ojson doc;
            doc["schema"] = "revoc.privacy/1";
            auto arr = ojson::array();
            for (const auto& r : rows) {
                ojson o;
                o["label"] = r.label;
                o["group"] = std::string(to_string(r.group));
                o["mode"] = r.mode;
                o["transaction_data"] = std::string(to_string(r.observed.transaction_data));
                o["holder_issuer"] = std::string(to_string(r.observed.holder_issuer));
                o["correlation"] = std::string(to_string(r.observed.correlation));
                o["linkage"] = std::string(to_string(r.observed.linkage));
                o["holder_verifier"] = std::string(to_string(r.observed.holder_verifier));
                o["matches"] = r.matches;
                arr.push_back(std::move(o));
            }
            doc["rows"] = std::move(arr);
            out = doc.dump(2) + "\n";
            break;
        }
    }
    return out;
}

// ------------------------------------------------------------------ scaling

std::string render_scaling(const std::vector<ScalingResult>& results, OutputFormat f) {
    std::string out;
    switch (f) {
        case OutputFormat::Table: {
            for (const auto& r : results) {
                const auto& info = method_info(r.method);
                out += std::string(to_string(r.method)) + " (" + std::string(info.scaling_series) + ")\n";
                for (const auto& p : r.points) {
                    out += "  N=" + pad(std::to_string(p.population), 10) + fmt(p.value, 3) + "\n";
                }
                out += "  slope " + fmt(r.fit.slope, 4) + "  residual " + fmt(r.fit.residual, 4) + "  verdict " +
                       std::string(to_string(r.verdict)) + "  declared " + std::string(to_string(info.scaling)) +
                       "  " + (r.matches_declared ? "ok" : "VIOLATION") + "\n";
            }
            break;
        }
        case OutputFormat::Csv: {
            out += "method,series,population,value,slope,residual,verdict,declared,matches\n";
            for (const auto& r : results) {
                const auto& info = method_info(r.method);
                for (const auto& p : r.points) {
                    out += std::string(to_string(r.method)) + "," + std::string(info.scaling_series) + "," +
                           std::to_string(p.population) + "," + fmt(p.value, 3) + "," + fmt(r.fit.slope, 4) + "," +
                           fmt(r.fit.residual, 4) + "," + std::string(to_string(r.verdict)) + "," +
                           std::string(to_string(info.scaling)) + "," + bit(r.matches_declared) + "\n";
                }
            }
            break;
        }
        case OutputFormat::Json: {
            ojson doc;
            doc["schema"] = "revoc.scaling/1";
            auto arr = ojson::array();
            for (const auto& r : results) {
                const auto& info = method_info(r.method);
                ojson o;
                o["method"] = std::string(to_string(r.method));
                o["series"] = std::string(info.scaling_series);
                auto pts = ojson::array();
                for (const auto& p : r.points) {
                    ojson q;
                    q["population"] = p.population;
                    q["value"] = fmt(p.value, 3);
                    pts.push_back(std::move(q));
                }
                o["points"] = std::move(pts);
                o["slope"] = fmt(r.fit.slope, 4);
                o["residual"] = fmt(r.fit.residual, 4);
                o["verdict"] = std::string(to_string(r.verdict));
                o["declared"] = std::string(to_string(info.scaling));
                o["matches"] = r.matches_declared;
                arr.push_back(std::move(o));
            }
            doc["methods"] = std::move(arr);
            out = doc.dump(2) + "\n";
            break;
        }
    }
    return out;
}

std::string render_extrapolation(const StorageExtrapolation& e, OutputFormat f) {
    switch (f) {
        case OutputFormat::Table:
            return "lvvc issuer storage: " + std::to_string(e.credentials) + " credentials x " +
                   std::to_string(e.artifact_size) + " bytes = " + std::to_string(e.total_bytes) + " bytes\n";
        case OutputFormat::Csv:
            return "artifact_size,credentials,total_bytes\n" + std::to_string(e.artifact_size) + "," +
                   std::to_string(e.credentials) + "," + std::to_string(e.total_bytes) + "\n";
        case OutputFormat::Json: {
            ojson doc;
            doc["schema"] = "revoc.extrapolation/1";
            doc["artifact_size"] = e.artifact_size;
            doc["credentials"] = e.credentials;
            doc["total_bytes"] = e.total_bytes;
            return doc.dump(2) + "\n";
        }
    }
    return {};
}

}  // namespace revoc
