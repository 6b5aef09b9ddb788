#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>

#include "revoc/core/errors.hpp"
#include "revoc/sim/experiments.hpp"
#include "revoc/sim/simulation.hpp"

namespace revoc {
namespace {

ScriptEvent issue(std::uint64_t h) { return {EventKind::Issue, h, 0}; }
ScriptEvent revoke(std::uint64_t h) { return {EventKind::Revoke, h, 0}; }
ScriptEvent verify(std::uint64_t h, std::uint32_t v = 0) { return {EventKind::Verify, h, v}; }
ScriptEvent advance() { return {EventKind::Advance, 0, 0}; }

Scenario generated(MethodKind m, std::uint64_t n = 20, std::uint64_t epochs = 4) {
    Scenario s;
    s.method = m;
    s.population = n;
    s.epochs = epochs;
    s.seed = 5;
    s.verifiers = 3;
    s.sync = {SyncPolicyKind::Sampled, 4};
    s.revocations.per_epoch = 1;
    s.verifications.per_epoch = 6;
    return s;
}

ErrorCode error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::Malformed;
}

// ------------------------------------------------------------------ scenario

TEST(Scenario, JsonRoundTrip) {
    Scenario s;
    s.method = MethodKind::BloomList;
    s.population = 33;
    s.epochs = 6;
    s.seed = 77;
    s.verifiers = 4;
    s.sync = {SyncPolicyKind::Sampled, 5};
    s.revocations = {2, {{1, 3, 0}, {4, 9, 0}}};
    s.verifications = {3, {{2, 1, 3}}};
    s.params.id_mode = IdMode::Pairwise;
    s.params.max_age = 2;
    s.params.capacity = 64;
    s.params.bloom_bits = 1000;
    s.params.bloom_hashes = 3;
    s.params.trapdoor = true;
    s.claim_count = 9;
    s.retain_payloads = true;
    s.audit = true;
    const auto text = scenario_to_json(s);
    EXPECT_EQ(parse_scenario(text), s);
    EXPECT_EQ(scenario_to_json(parse_scenario(text)), text);

    Scenario scripted;
    scripted.method = MethodKind::Lvvc;
    scripted.script = {issue(0), advance(), {EventKind::Sync, 0, 0}, verify(0, 1), revoke(0)};
    EXPECT_EQ(parse_scenario(scenario_to_json(scripted)), scripted);
}

TEST(Scenario, DefaultsFromMinimalConfig) {
    const auto s = parse_scenario(R"({"method": "simple-list"})");
    EXPECT_EQ(s, Scenario{});
}

TEST(Scenario, InvalidConfigsAreRejected) {
    const char* bad[] = {
        R"({})",
        R"({"method": "crl"})",
        R"({"method": "simple-list", "colour": 1})",
        R"({"method": "simple-list", "seed": 1, "seed": 2})",
        R"({"method": "simple-list", "population": 0})",
        R"({"method": "simple-list", "verifiers": 0})",
        R"({"method": "simple-list", "population": -3})",
        R"({"method": "simple-list", "population": "ten"})",
        R"({"method": "simple-list", "sync": "sometimes"})",
        R"({"method": "simple-list", "sync": "sampled:0"})",
        R"({"method": "simple-list", "population": 4, "sync": "sampled:5"})",
        R"({"method": "bitlist", "population": 10, "capacity": 5})",
        R"({"method": "bloom-list", "bloom_bits": 0})",
        R"({"method": "simple-list", "epochs": 2, "revocations": {"entries": [{"epoch": 3, "holder": 0}]}})",
        R"({"method": "simple-list", "revocations": {"entries": [{"epoch": 1, "holder": 10}]}})",
        R"({"method": "simple-list", "verifications": {"entries": [{"epoch": 1, "holder": 0, "verifier": 2}]}})",
        R"({"method": "simple-list", "script": [{"op": "jump"}]})",
        R"({"method": "simple-list", "script": [{"op": "issue", "holder": 10}]})",
        R"({"method": "simple-list", "profile": "huge"})",
        R"({"method": "simple-list", "id_mode": "sometimes"})",
        R"({"method": "simple-list", "epochs": 0})",
        R"([1, 2])",
        R"({"method": )",
    };
    for (const char* text : bad) {
        EXPECT_EQ(error_of([&] { parse_scenario(text); }), ErrorCode::ConfigError) << text;
    }
}

TEST(Scenario, SyncPolicyNames) {
    for (const char* text : {"eager", "sampled:3", "on_demand", "manual"}) {
        EXPECT_EQ(to_string(parse_sync_policy(text)), text);
    }
    EXPECT_EQ(parse_sync_policy("sampled:16").sample, 16u);
    EXPECT_THROW(parse_sync_policy("sampled:x"), Error);
    EXPECT_THROW(parse_sync_policy("sampled:"), Error);
}

// ---------------------------------------------------------------- simulation

TEST(Simulation, RunsAreReproducible) {
    for (auto m : all_methods()) {
        const auto a = run_scenario(generated(m));
        const auto b = run_scenario(generated(m));
        EXPECT_EQ(a.ledger.digest(), b.ledger.digest()) << to_string(m);
        EXPECT_EQ(a.ledger.to_csv(), b.ledger.to_csv()) << to_string(m);
        EXPECT_EQ(metrics_csv_row(a.metrics), metrics_csv_row(b.metrics)) << to_string(m);

        auto other = generated(m);
        other.seed = 6;
        EXPECT_NE(run_scenario(other).ledger.digest(), a.ledger.digest()) << to_string(m);
    }
}

TEST(Simulation, PhaseBytesAddUpToTheLedger) {
    for (auto m : all_methods()) {
        const auto r = run_scenario(generated(m));
        const auto& mt = r.metrics;
        EXPECT_EQ(mt.phase_bytes[0] + mt.phase_bytes[1] + mt.phase_bytes[2], mt.ledger_bytes) << to_string(m);
        EXPECT_EQ(mt.phase_records[0] + mt.phase_records[1] + mt.phase_records[2], mt.ledger_records);
        EXPECT_EQ(mt.ledger_bytes, r.ledger.total_payload_bytes());
        EXPECT_EQ(mt.ledger_records, r.ledger.size());
        std::uint64_t sum = 0;
        for (const auto& rec : r.ledger.records()) sum += rec.payload_bytes;
        EXPECT_EQ(sum, mt.ledger_bytes);
    }
}

TEST(Simulation, EveryStateChangeIsOnTheLedger) {
    for (auto m : all_methods()) {
        for (auto mode : {IdMode::Stable, IdMode::Pairwise}) {
            auto s = generated(m, 12, 3);
            s.audit = true;
            s.params.id_mode = mode;
            Simulation sim(s);
            sim.run();
            EXPECT_EQ(sim.audit_violations(), 0u) << to_string(m) << " " << to_string(mode);
            EXPECT_EQ(sim.metrics().audit_violations, 0u);
        }
    }
}

TEST(Simulation, VerificationTrafficToTheIssuer) {
    auto small = [](MethodKind m) {
        Scenario s;
        s.method = m;
        s.population = 10;
        s.epochs = 3;
        s.verifiers = 2;
        s.revocations.entries = {{1, 4, 0}};
        s.verifications.entries = {{1, 0, 0}, {2, 1, 1}, {2, 4, 0}, {3, 5, 1}, {3, 9, 0}};
        return run_scenario(s);
    };
    const auto lvvc = small(MethodKind::Lvvc);
    EXPECT_EQ(lvvc.metrics.verification_issuer_records, 0u);
    EXPECT_EQ(lvvc.metrics.verification_issuer_contacts, 0u);
    const auto list = small(MethodKind::SimpleList);
    EXPECT_EQ(list.metrics.verifications, 5u);
    EXPECT_EQ(list.metrics.verification_issuer_contacts, 5u);
    EXPECT_EQ(list.metrics.verifications_valid, 4u);
}

TEST(Simulation, VerifiersOnlyCallHomeForListMethods) {
    for (auto m : all_methods()) {
        const auto r = run_scenario(generated(m));
        std::uint64_t to_issuer = 0;
        for (const auto& rec : r.ledger.records()) {
            if (rec.phase == Phase::Verification && rec.from.role == Role::Verifier && rec.to.role == Role::Issuer) {
                ++to_issuer;
            }
        }
        std::uint64_t contacts = 0;
        for (const auto& v : r.verifications) contacts += v.outcome.issuer_contacted ? 1 : 0;
        EXPECT_EQ(to_issuer, contacts) << to_string(m);
        if (!method_info(m).calls_home && m != MethodKind::BloomList) {
            EXPECT_EQ(to_issuer, 0u) << to_string(m);
        }
        if (method_info(m).calls_home) {
            EXPECT_EQ(contacts, r.verifications.size()) << to_string(m);
        }
    }
}

TEST(Simulation, RevocationWaitsForTheEpochBoundary) {
    Scenario s;
    s.method = MethodKind::SimpleList;
    s.population = 1;
    s.script = {issue(0), advance(), revoke(0), verify(0), advance(), verify(0)};
    const auto r = run_scenario(s);
    EXPECT_TRUE(r.verifications[0].outcome.valid);
    EXPECT_FALSE(r.verifications[1].outcome.valid);
}

TEST(Simulation, SyncPolicies) {
    auto syncs = [](SyncPolicy p) {
        Scenario s;
        s.method = MethodKind::MerkleAccumulator;
        s.population = 10;
        s.verifiers = 1;
        s.sync = p;
        s.script = {issue(0), issue(1), issue(2), issue(3), issue(4), issue(5), issue(6), issue(7), issue(8),
                    issue(9), advance(), advance(), verify(3)};
        Simulation sim(s);
        sim.run();
        return sim.syncs();
    };
    EXPECT_EQ(syncs({SyncPolicyKind::Eager, 0}).size(), 21u);
    const auto sampled = syncs({SyncPolicyKind::Sampled, 3});
    ASSERT_EQ(sampled.size(), 7u);
    EXPECT_EQ(sampled[0].holder, 0u);
    EXPECT_EQ(sampled[1].holder, 3u);
    EXPECT_EQ(sampled[2].holder, 6u);
    EXPECT_EQ(syncs({SyncPolicyKind::OnDemand, 0}).size(), 1u);
    EXPECT_TRUE(syncs({SyncPolicyKind::Manual, 0}).empty());
}

TEST(Simulation, ApiMisuse) {
    Scenario s;
    s.population = 2;
    s.script = {issue(0)};
    Simulation sim(s);
    sim.run();
    EXPECT_EQ(error_of([&] { sim.issue(0); }), ErrorCode::ConfigError);
    EXPECT_EQ(error_of([&] { sim.issue(5); }), ErrorCode::ConfigError);
    EXPECT_EQ(error_of([&] { sim.verify(1, 0); }), ErrorCode::NotMember);
    EXPECT_EQ(error_of([&] { sim.verify(0, 9); }), ErrorCode::ConfigError);
    EXPECT_EQ(error_of([&] { sim.revoke(1); }), ErrorCode::NotMember);
    EXPECT_EQ(error_of([&] { sim.credential_id(1); }), ErrorCode::NotMember);
}

TEST(Metrics, ExportsShareOneColumnOrder) {
    const auto m = run_scenario(generated(MethodKind::RsaAccumulator)).metrics;
    const auto fields = m.fields();
    std::string header;
    for (const auto& [name, value] : fields) header += (header.empty() ? "" : ",") + name;
    EXPECT_EQ(metrics_csv_header(), header);
    const auto row = metrics_csv_row(m);
    EXPECT_EQ(std::count(row.begin(), row.end(), ','),
              static_cast<std::ptrdiff_t>(fields.size() - 1));

    const auto doc = nlohmann::json::parse(metrics_to_json({m, m}));
    EXPECT_EQ(doc["schema"], "revoc.metrics/1");
    ASSERT_EQ(doc["runs"].size(), 2u);
    EXPECT_EQ(doc["runs"][0]["method"], std::string(to_string(MethodKind::RsaAccumulator)));
    EXPECT_EQ(doc["runs"][0]["ledger_bytes"].get<std::uint64_t>(), m.ledger_bytes);
    EXPECT_EQ(doc["runs"][0].size(), fields.size());
}

TEST(Ledger, ViewsAndCsv) {
    const auto r = run_scenario(generated(MethodKind::SimpleList, 5, 2));
    const ActorRef v0{Role::Verifier, 0};
    const Ledger view = r.ledger.view_of(v0);
    EXPECT_GT(view.size(), 0u);
    for (const auto& rec : view.records()) EXPECT_TRUE(rec.involves(v0));
    const auto csv = r.ledger.to_csv();
    EXPECT_EQ(csv.substr(0, Ledger::kCsvHeader.size()), Ledger::kCsvHeader);
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.ledger.size() + 1);
}

// --------------------------------------------------------------- experiments

TEST(Interactions, ObservedPatternMatchesDeclaration) {
    const RoleSet i{true, false, false};
    const RoleSet ih{true, true, false};
    const RoleSet hv{false, true, true};
    const RoleSet ihv{true, true, true};
    const InteractionPattern list{i, i, ihv};
    const InteractionPattern other{ih, ih, hv};
    for (auto m : all_methods()) {
        const auto observed = interaction_matrix(m);
        const bool list_group = m == MethodKind::SimpleList || m == MethodKind::HiddenList ||
                                m == MethodKind::CompressedBitList || m == MethodKind::BloomList;
        EXPECT_EQ(observed, list_group ? list : other) << to_string(m);
        EXPECT_EQ(observed, method_info(m).declared) << to_string(m);
    }
}

TEST(Interactions, RoleSetText) {
    EXPECT_EQ((RoleSet{true, false, true}).str(), "I   V");
    EXPECT_EQ((RoleSet{true, true, true}).str(), "I H V");
}

TEST(Scaling, FitRecoversAPowerLaw) {
    std::vector<double> xs{100, 1000, 10000, 100000};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(3.0 * std::pow(x, 0.5));
    const auto fit = fit_loglog(xs, ys);
    EXPECT_NEAR(fit.slope, 0.5, 1e-12);
    EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-9);
    EXPECT_NEAR(fit.residual, 0.0, 1e-12);

    const auto flat = fit_loglog({10, 20, 40}, {7, 7, 7});
    EXPECT_NEAR(flat.slope, 0.0, 1e-12);

    EXPECT_THROW(fit_loglog({10}, {1}), Error);
    EXPECT_THROW(fit_loglog({10, 20}, {1, 0}), Error);
    EXPECT_THROW(fit_loglog({10, 10}, {1, 2}), Error);
    EXPECT_THROW(fit_loglog({10, 20}, {1}), Error);
}

TEST(Scaling, SlopeClasses) {
    EXPECT_EQ(classify_slope(0.0), ScalingClass::Constant);
    EXPECT_EQ(classify_slope(0.02), ScalingClass::Constant);
    EXPECT_EQ(classify_slope(-0.02), ScalingClass::Constant);
    EXPECT_EQ(classify_slope(0.021), ScalingClass::Sublinear);
    EXPECT_EQ(classify_slope(0.79), ScalingClass::Sublinear);
    EXPECT_EQ(classify_slope(0.8), ScalingClass::Linear);
    EXPECT_EQ(classify_slope(1.2), ScalingClass::Linear);
    EXPECT_EQ(classify_slope(1.21), ScalingClass::Superlinear);
}

TEST(Scaling, BitListSnapshotSizeIsExact) {
    const auto tmpl = sweep_template();
    for (std::uint64_t n : {100u, 1000u, 1001u, 4096u}) {
        const auto r = run_scenario(scaling_scenario(MethodKind::CompressedBitList, n, tmpl));
        EXPECT_EQ(r.metrics.status_query_bytes_max, 17 + (n + 7) / 8) << n;
    }
}

TEST(Scaling, SweepVerdictsForCheapMethods) {
    const auto tmpl = sweep_template();
    // below ~1000 holders the fixed snapshot header still flattens the bit list
    const std::vector<std::uint64_t> pops{1024, 2048, 4096};
    for (auto m : {MethodKind::SimpleList, MethodKind::CompressedBitList, MethodKind::BloomList,
                   MethodKind::MerkleAccumulator, MethodKind::Lvvc}) {
        const auto r = scaling_sweep(m, pops, tmpl);
        EXPECT_TRUE(r.matches_declared) << to_string(m) << " slope " << r.fit.slope;
    }
    EXPECT_THROW(scaling_sweep(MethodKind::Lvvc, {100}, tmpl), Error);
    EXPECT_THROW(scaling_sweep(MethodKind::Lvvc, {200, 100}, tmpl), Error);
}

TEST(SelectiveUpdate, WhoNeedsANewArtifact) {
    constexpr std::uint64_t n = 32;
    for (auto m : all_methods()) {
        const auto r = selective_update(m, n, 3);
        const auto g = method_info(m).group;
        if (g == MethodGroup::CryptographicAccumulators) {
            EXPECT_EQ(r.remaining_refreshed, n - 1) << to_string(m);
            EXPECT_TRUE(r.revoked_refresh_failed) << to_string(m);
            EXPECT_EQ(r.total_affected, n) << to_string(m);
        } else if (g == MethodGroup::CredentialUpdate || g == MethodGroup::Lvvc) {
            EXPECT_EQ(r.remaining_refreshed, 0u) << to_string(m);
            EXPECT_TRUE(r.revoked_refresh_failed) << to_string(m);
            EXPECT_EQ(r.total_affected, 1u) << to_string(m);
        } else {
            EXPECT_EQ(r.total_affected, 0u) << to_string(m);
        }
    }
}

TEST(Extrapolation, ConstantArtifactTimesCount) {
    const auto e = extrapolate_storage(153, 1'000'000);
    EXPECT_EQ(e.total_bytes, 153'000'000u);
    EXPECT_EQ(e.credentials, 1'000'000u);
}

}  // namespace
}  // namespace revoc
