#include "revoc/sim/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "revoc/core/errors.hpp"

namespace revoc {

namespace {

void mark(RoleSet& set, Role r) {
    switch (r) {
        case Role::Issuer: set.issuer = true; break;
        case Role::Holder: set.holder = true; break;
        case Role::Verifier: set.verifier = true; break;
        case Role::Registry: break;
    }
}

RoleSet& phase_row(InteractionPattern& p, Phase phase) {
    switch (phase) {
        case Phase::Issuance: return p.issuance;
        case Phase::Revocation: return p.revocation;
        case Phase::Verification: break;
    }
    return p.verification;
}

}  // namespace

InteractionPattern pattern_from_ledger(const Ledger& ledger) {
    InteractionPattern p;
    for (const auto& r : ledger.records()) {
        if (r.topic == Topic::CredentialDelivery) continue;
        auto& row = phase_row(p, r.phase);
        mark(row, r.from.role);
        mark(row, r.to.role);
    }
    return p;
}

Scenario interaction_probe(MethodKind m, const MethodParams& params) {
    Scenario s;
    s.method = m;
    s.population = 4;
    s.epochs = 2;
    s.seed = 7;
    s.verifiers = 2;
    s.sync = {SyncPolicyKind::Eager, 0};
    s.params = params;
    for (std::uint64_t h = 0; h < 4; ++h) s.script.push_back({EventKind::Issue, h, 0});
    s.script.push_back({EventKind::Advance, 0, 0});
    s.script.push_back({EventKind::Revoke, 0, 0});
    s.script.push_back({EventKind::Advance, 0, 0});
    for (std::uint64_t h = 0; h < 4; ++h) {
        s.script.push_back({EventKind::Verify, h, static_cast<std::uint32_t>(h % 2)});
    }
    return s;
}

InteractionPattern interaction_matrix(MethodKind m, const MethodParams& params) {
    return pattern_from_ledger(run_scenario(interaction_probe(m, params)).ledger);
}

LogLogFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw Error(ErrorCode::ConfigError, "need at least two points for a fit");
    }
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0 || ys[i] <= 0) {
            throw Error(ErrorCode::ConfigError, "log-log fit needs positive values");
        }
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
        sx += lx.back();
        sy += ly.back();
        sxx += lx.back() * lx.back();
        sxy += lx.back() * ly.back();
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0) {
        throw Error(ErrorCode::ConfigError, "populations must differ");
    }
    LogLogFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

ScalingClass classify_slope(double slope) {
    if (std::fabs(slope) <= 0.02) return ScalingClass::Constant;
    if (slope < 0.8) return ScalingClass::Sublinear;
    if (slope <= 1.2) return ScalingClass::Linear;
    return ScalingClass::Superlinear;
}

double scaling_value(MethodKind m, const Metrics& metrics) {
    const auto series = method_info(m).scaling_series;
    if (series == "verification_status_bytes" || series == "verifier_snapshot_bytes") {
        return static_cast<double>(metrics.status_query_bytes_max);
    }
    if (series == "bloom_filter_bytes") return static_cast<double>(metrics.publication_bytes_max);
    if (series == "mean_holder_sync_bytes") return metrics.mean_holder_sync_bytes();
    if (series == "refresh_payload_bytes") return static_cast<double>(metrics.refresh_payload_max);
    throw Error(ErrorCode::ConfigError, "unknown scaling series");
}

Scenario sweep_template(std::uint64_t seed, const MethodParams& params) {
    Scenario s;
    s.epochs = 3;
    s.seed = seed;
    s.verifiers = 2;
    s.sync = {SyncPolicyKind::Sampled, 16};
    s.revocations.per_epoch = 2;
    s.verifications.per_epoch = 8;
    s.params = params;
    return s;
}

Scenario scaling_scenario(MethodKind m, std::uint64_t population, const Scenario& tmpl) {
    Scenario s = tmpl;
    s.method = m;
    s.population = population;
    if (s.sync.kind == SyncPolicyKind::Sampled) {
        s.sync.sample = static_cast<std::uint32_t>(std::min<std::uint64_t>(s.sync.sample, population));
    }
    return s;
}

ScalingResult scaling_sweep(MethodKind m, const std::vector<std::uint64_t>& populations, const Scenario& tmpl) {
    if (populations.size() < 2) {
        throw Error(ErrorCode::ConfigError, "a sweep needs at least two populations");
    }
    for (std::size_t i = 1; i < populations.size(); ++i) {
        if (populations[i] <= populations[i - 1]) {
            throw Error(ErrorCode::ConfigError, "populations must be strictly ascending");
        }
    }
    ScalingResult out;
    out.method = m;
    std::vector<double> xs, ys;
    for (auto n : populations) {
        auto r = run_scenario(scaling_scenario(m, n, tmpl));
        ScalingPoint p{n, r.metrics, scaling_value(m, r.metrics)};
        xs.push_back(static_cast<double>(n));
        ys.push_back(p.value);
        out.points.push_back(std::move(p));
    }
    out.fit = fit_loglog(xs, ys);
    out.verdict = classify_slope(out.fit.slope);
    out.matches_declared = out.verdict == method_info(m).scaling;
    return out;
}

SelectiveUpdate selective_update(MethodKind m, std::uint64_t population, std::uint64_t seed,
                                 const MethodParams& params) {
    auto make = [&](bool with_revocation) {
        Scenario s;
        s.method = m;
        s.population = population;
        s.epochs = 2;
        s.seed = seed;
        s.verifiers = 1;
        s.sync = {SyncPolicyKind::Eager, 0};
        s.params = params;
        for (std::uint64_t h = 0; h < population; ++h) s.script.push_back({EventKind::Issue, h, 0});
        s.script.push_back({EventKind::Advance, 0, 0});
        if (with_revocation) s.script.push_back({EventKind::Revoke, 0, 0});
        s.script.push_back({EventKind::Advance, 0, 0});
        return s;
    };
    Simulation with(make(true));
    with.run();
    Simulation without(make(false));
    without.run();

    SelectiveUpdate out;
    out.population = population;
    for (std::uint64_t h = 1; h < population; ++h) {
        if (with.artifact_digest(h) != without.artifact_digest(h)) ++out.remaining_refreshed;
    }
    for (const auto& s : with.syncs()) {
        if (s.holder == 0 && s.epoch == 2 && s.status == SyncStatus::Failed) out.revoked_refresh_failed = true;
    }
    const bool revoked_affected = out.revoked_refresh_failed || with.artifact_digest(0) != without.artifact_digest(0);
    out.total_affected = out.remaining_refreshed + (revoked_affected ? 1 : 0);
    return out;
}

StorageExtrapolation extrapolate_storage(std::uint64_t artifact_size, std::uint64_t credentials) {
    return {artifact_size, credentials, artifact_size * credentials};
}

}  // namespace revoc
