// revoc-bench: runs scenarios, sweeps and probes and prints comparison tables.
//
// Exit codes: 0 success, 1 reference mismatch or scaling violation, 2 bad
// configuration.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "revoc/core/errors.hpp"
#include "revoc/report/tables.hpp"

namespace {

using namespace revoc;

struct Options {
    std::vector<std::string> methods;
    std::vector<std::uint64_t> populations;
    std::uint64_t epochs = 3;
    std::uint64_t seed = 1;
    std::string format = "table";
    std::string out;
    std::string profile;
    std::string id_mode;
    std::uint64_t max_age = 1;
    std::string config;
    std::string ledger_out;
};

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + o.out);
    f << text;
}

MethodParams params_from(const Options& o) {
    MethodParams p;
    std::string profile = o.profile;
    if (profile.empty()) {
        const char* env = std::getenv("REVOC_PROFILE");
        profile = env != nullptr && *env != '\0' ? env : "toy";
    }
    p.profile = parse_profile(profile);
    if (p.profile == CryptoProfile::Full) {
        std::cerr << "warning: full crypto profile (2048-bit RSA); runs are much slower\n";
    }
    p.max_age = o.max_age;
    return p;
}

std::vector<MethodKind> methods_from(const Options& o) {
    if (o.methods.empty()) return all_methods();
    std::vector<MethodKind> out;
    for (const auto& name : o.methods) out.push_back(parse_method(name));
    return out;
}

int cmd_interactions(const Options& o) {
    const auto fmt = parse_format(o.format);
    const auto rows = interaction_rows(methods_from(o), params_from(o));
    emit(o, render_interactions(rows, fmt));
    return all_match(rows) ? 0 : 1;
}

int cmd_privacy(const Options& o) {
    const auto fmt = parse_format(o.format);
    const auto params = params_from(o);
    std::optional<IdMode> mode;
    if (!o.id_mode.empty()) mode = parse_id_mode(o.id_mode);
    std::vector<PrivacyRow> rows;
    if (o.methods.size() > 1) {
        throw Error(ErrorCode::ConfigError, "privacy takes at most one --method");
    }
    if (o.methods.size() == 1) {
        rows = privacy_rows_for_method(parse_method(o.methods.front()), mode, o.seed, params);
    } else if (mode) {
        rows = privacy_rows_for_mode(*mode, o.seed, params);
    } else {
        rows = privacy_rows(o.seed, params);
    }
    emit(o, render_privacy(rows, fmt));
    return all_match(rows) ? 0 : 1;
}

int cmd_scale(const Options& o) {
    const auto fmt = parse_format(o.format);
    if (o.populations.size() < 2) {
        throw Error(ErrorCode::ConfigError, "scale needs at least two --populations");
    }
    auto tmpl = sweep_template(o.seed, params_from(o));
    tmpl.epochs = o.epochs;
    std::vector<ScalingResult> results;
    bool ok = true;
    for (auto m : methods_from(o)) {
        results.push_back(scaling_sweep(m, o.populations, tmpl));
        ok = ok && results.back().matches_declared;
    }
    std::string text = render_scaling(results, fmt);
    if (fmt == OutputFormat::Table) {
        for (const auto& r : results) {
            if (r.method != MethodKind::Lvvc) continue;
            text += render_extrapolation(extrapolate_storage(r.points.back().metrics.artifact_bytes_max, 1'000'000),
                                         fmt);
        }
    }
    emit(o, text);
    return ok ? 0 : 1;
}

int cmd_run(const Options& o) {
    const auto fmt = parse_format(o.format);
    std::ifstream f(o.config, std::ios::binary);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot read " + o.config);
    std::stringstream buf;
    buf << f.rdbuf();
    const auto scenario = parse_scenario(buf.str());
    if (scenario.params.profile == CryptoProfile::Full) {
        std::cerr << "warning: full crypto profile (2048-bit RSA); runs are much slower\n";
    }
    const auto result = run_scenario(scenario);
    if (!o.ledger_out.empty()) {
        std::ofstream lf(o.ledger_out, std::ios::binary);
        if (!lf) throw Error(ErrorCode::ConfigError, "cannot write " + o.ledger_out);
        lf << result.ledger.to_csv();
    }
    switch (fmt) {
        case OutputFormat::Json: emit(o, metrics_to_json({result.metrics})); break;
        case OutputFormat::Csv: emit(o, metrics_csv_header() + "\n" + metrics_csv_row(result.metrics) + "\n"); break;
        case OutputFormat::Table: {
            std::string text;
            for (const auto& [name, value] : result.metrics.fields()) {
                text += name + std::string(name.size() < 32 ? 32 - name.size() : 1, ' ') + value + "\n";
            }
            emit(o, text);
            break;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Credential revocation method benchmark"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
        sub->add_option("--out", o.out, "write output to this file");
    };
    auto add_method_opts = [&](CLI::App* sub) {
        sub->add_option("--method", o.methods, "method name (repeatable)");
        sub->add_option("--profile", o.profile, "toy or full (default: $REVOC_PROFILE or toy)");
        sub->add_option("--max-age", o.max_age, "verifier freshness window in epochs");
    };

    auto* inter = app.add_subcommand("interactions", "roles taking part in each phase");
    add_common(inter);
    add_method_opts(inter);

    auto* priv = app.add_subcommand("privacy", "holder privacy aspects and levels");
    add_common(priv);
    add_method_opts(priv);
    priv->add_option("--seed", o.seed, "probe seed");
    priv->add_option("--id-mode", o.id_mode, "stable or pairwise (default: both)")
        ->check(CLI::IsMember({"stable", "pairwise"}));

    auto* scale = app.add_subcommand("scale", "population sweeps with log-log fits");
    add_common(scale);
    add_method_opts(scale);
    scale->add_option("--populations", o.populations, "ascending populations")->delimiter(',')->required();
    scale->add_option("--seed", o.seed, "scenario seed");
    scale->add_option("--epochs", o.epochs, "epochs per run");

    auto* run = app.add_subcommand("run", "run one scenario from a JSON config");
    add_common(run);
    run->add_option("--config", o.config, "scenario JSON file")->required();
    run->add_option("--ledger-out", o.ledger_out, "write the ledger as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*inter) return cmd_interactions(o);
        if (*priv) return cmd_privacy(o);
        if (*scale) return cmd_scale(o);
        if (*run) return cmd_run(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::ConfigError ? 2 : 1;
    }
    return 2;
}
