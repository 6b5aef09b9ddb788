#pragma once

// Comparison tables: reference values, observed rows and their renderings as
// fixed-width text, CSV and JSON.

#include <string>
#include <string_view>
#include <vector>

#include "revoc/privacy/privacy.hpp"
#include "revoc/sim/experiments.hpp"

namespace revoc {

enum class OutputFormat : std::uint8_t { Table, Csv, Json };
OutputFormat parse_format(std::string_view text);  // ConfigError on unknown names

/// Reference interaction pattern of each method group.
const InteractionPattern& reference_interactions(MethodGroup g);

/// Reference privacy cells of each method group. Levels describe the
/// privacy-preserving (pairwise) deployment.
const PrivacyReport& reference_privacy(MethodGroup g);

/// A reference cell as it must appear when only one id mode is run.
Aspect resolve_for_mode(Aspect reference, IdMode mode);

struct InteractionRow {
    std::string label;
    MethodGroup group = MethodGroup::ListBased;
    bool variant = false;  // a single method listed under its group
    InteractionPattern observed;
    bool matches = false;
};

/// All methods: one row per group followed by its methods when a group has
/// more than one. A single method: one row.
std::vector<InteractionRow> interaction_rows(const std::vector<MethodKind>& methods, const MethodParams& params = {});
bool all_match(const std::vector<InteractionRow>& rows);
std::string render_interactions(const std::vector<InteractionRow>& rows, OutputFormat f);

struct PrivacyRow {
    std::string label;
    MethodGroup group = MethodGroup::ListBased;
    std::string mode;  // "both", "stable" or "pairwise"
    PrivacyReport observed;
    bool matches = false;
};

/// Group rows with both id modes combined.
std::vector<PrivacyRow> privacy_rows(std::uint64_t seed, const MethodParams& params = {});
/// Group rows for one id mode; aspects compared against the resolved reference.
std::vector<PrivacyRow> privacy_rows_for_mode(IdMode mode, std::uint64_t seed, const MethodParams& params = {});
/// One method, one row per id mode (or only `mode`).
std::vector<PrivacyRow> privacy_rows_for_method(MethodKind m, std::optional<IdMode> mode, std::uint64_t seed,
                                                const MethodParams& params = {});
bool all_match(const std::vector<PrivacyRow>& rows);
std::string render_privacy(const std::vector<PrivacyRow>& rows, OutputFormat f);

std::string render_scaling(const std::vector<ScalingResult>& results, OutputFormat f);
std::string render_extrapolation(const StorageExtrapolation& e, OutputFormat f);

}  // namespace revoc
