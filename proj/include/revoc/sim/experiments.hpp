#pragma once

// Canned experiments on top of Simulation: the interaction probe, population
// sweeps with a log-log fit, and the selective-update comparison.

#include <cstdint>
#include <vector>

#include "revoc/sim/simulation.hpp"

namespace revoc {

/// Which roles took part in each phase. Registry traffic and the delivery of
/// the base credential are not interactions between roles.
InteractionPattern pattern_from_ledger(const Ledger& ledger);

/// Probe scenario: four credentials, one revocation, one verification each.
Scenario interaction_probe(MethodKind m, const MethodParams& params = {});
InteractionPattern interaction_matrix(MethodKind m, const MethodParams& params = {});

struct LogLogFit {
    double slope = 0;
    double intercept = 0;
    double residual = 0;  // RMS of the log residuals
};

/// Least squares of ln(y) against ln(x). Throws ConfigError on fewer than two
/// points or non-positive values.
LogLogFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

/// constant |b| <= 0.02, sublinear < 0.8, linear <= 1.2, superlinear above.
ScalingClass classify_slope(double slope);

/// The method's declared scaling series read from a run's metrics.
double scaling_value(MethodKind m, const Metrics& metrics);

struct ScalingPoint {
    std::uint64_t population = 0;
    Metrics metrics;
    double value = 0;
};

struct ScalingResult {
    MethodKind method = MethodKind::SimpleList;
    std::vector<ScalingPoint> points;
    LogLogFit fit;
    ScalingClass verdict = ScalingClass::Constant;
    bool matches_declared = false;
};

/// Default sweep settings: three epochs, two random revocations and eight
/// random verifications per epoch, sixteen sampled syncing holders.
Scenario sweep_template(std::uint64_t seed = 1, const MethodParams& params = {});

/// The template at one population (the sample is capped at the population).
Scenario scaling_scenario(MethodKind m, std::uint64_t population, const Scenario& tmpl);

/// Throws ConfigError unless populations has >= 2 ascending entries.
ScalingResult scaling_sweep(MethodKind m, const std::vector<std::uint64_t>& populations, const Scenario& tmpl);

struct SelectiveUpdate {
    std::uint64_t population = 0;
    std::uint64_t remaining_refreshed = 0;  // non-revoked holders whose artifact changed because of the revocation
    bool revoked_refresh_failed = false;
    std::uint64_t total_affected = 0;  // remaining_refreshed plus the revoked holder if affected
};

/// Twin runs, with and without one revocation, compared holder by holder.
SelectiveUpdate selective_update(MethodKind m, std::uint64_t population, std::uint64_t seed,
                                 const MethodParams& params = {});

struct StorageExtrapolation {
    std::uint64_t artifact_size = 0;
    std::uint64_t credentials = 0;
    std::uint64_t total_bytes = 0;
};

/// Issuer-side storage of one constant-size artifact per credential.
StorageExtrapolation extrapolate_storage(std::uint64_t artifact_size, std::uint64_t credentials);

}  // namespace revoc
