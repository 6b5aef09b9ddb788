#include "revoc/sim/scenario.hpp"

#include <charconv>
#include <json.hpp>
#include <limits>
#include <set>
#include <type_traits>

#include "revoc/core/errors.hpp"

namespace revoc {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& what) {
    throw Error(ErrorCode::ConfigError, what);
}

std::uint64_t parse_count(std::string_view text) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) config_error("bad number '" + std::string(text) + "'");
    return v;
}

EventKind parse_event_kind(std::string_view s) {
    for (auto k : {EventKind::Issue, EventKind::Revoke, EventKind::Sync, EventKind::Verify, EventKind::Advance}) {
        if (to_string(k) == s) return k;
    }
    config_error("unknown script op '" + std::string(s) + "'");
}

template <typename T>
T get_as(const json& j, const char* key) {
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        const auto& v = j.at(key);
        if (!v.is_number_unsigned() || v.get<std::uint64_t>() > std::numeric_limits<T>::max()) {
            config_error(std::string("field '") + key + "' must be a non-negative integer in range");
        }
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        config_error(std::string("field '") + key + "': " + e.what());
    }
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, const char* where) {
    if (!j.is_object()) config_error(std::string(where) + " must be an object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || k == a;
        if (!ok) config_error(std::string("unknown field '") + k + "' in " + where);
    }
}

Schedule parse_schedule(const json& j, const char* where) {
    check_keys(j, {"per_epoch", "entries"}, where);
    Schedule s;
    if (j.contains("per_epoch")) s.per_epoch = get_as<std::uint64_t>(j, "per_epoch");
    if (j.contains("entries")) {
        if (!j["entries"].is_array()) config_error(std::string(where) + ".entries must be an array");
        for (const auto& e : j["entries"]) {
            check_keys(e, {"epoch", "holder", "verifier"}, where);
            Schedule::Entry entry;
            entry.epoch = get_as<std::uint64_t>(e, "epoch");
            entry.holder = get_as<std::uint64_t>(e, "holder");
            if (e.contains("verifier")) entry.verifier = get_as<std::uint32_t>(e, "verifier");
            s.entries.push_back(entry);
        }
    }
    return s;
}

nlohmann::ordered_json schedule_json(const Schedule& s, bool with_verifier) {
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : s.entries) {
        nlohmann::ordered_json o = {{"epoch", e.epoch}, {"holder", e.holder}};
        if (with_verifier) o["verifier"] = e.verifier;
        entries.push_back(std::move(o));
    }
    nlohmann::ordered_json out;
    out["per_epoch"] = s.per_epoch;
    out["entries"] = std::move(entries);
    return out;
}

}  // namespace

std::string to_string(const SyncPolicy& p) {
    switch (p.kind) {
        case SyncPolicyKind::Eager: return "eager";
        case SyncPolicyKind::Sampled: return "sampled:" + std::to_string(p.sample);
        case SyncPolicyKind::OnDemand: return "on_demand";
        case SyncPolicyKind::Manual: return "manual";
    }
    return "?";
}

SyncPolicy parse_sync_policy(std::string_view text) {
    if (text == "eager") return {SyncPolicyKind::Eager, 0};
    if (text == "on_demand") return {SyncPolicyKind::OnDemand, 0};
    if (text == "manual") return {SyncPolicyKind::Manual, 0};
    constexpr std::string_view prefix = "sampled:";
    if (text.starts_with(prefix)) {
        auto k = parse_count(text.substr(prefix.size()));
        if (k == 0 || k > UINT32_MAX) config_error("sample size must be positive");
        return {SyncPolicyKind::Sampled, static_cast<std::uint32_t>(k)};
    }
    config_error("unknown sync policy '" + std::string(text) + "'");
}

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::Issue: return "issue";
        case EventKind::Revoke: return "revoke";
        case EventKind::Sync: return "sync";
        case EventKind::Verify: return "verify";
        case EventKind::Advance: return "advance";
    }
    return "?";
}

bool Scenario::operator==(const Scenario& o) const {
    return method == o.method && population == o.population && epochs == o.epochs && seed == o.seed &&
           verifiers == o.verifiers && sync == o.sync && revocations == o.revocations &&
           verifications == o.verifications && script == o.script && params == o.params &&
           claim_count == o.claim_count && retain_payloads == o.retain_payloads && audit == o.audit;
}

void Scenario::validate() const {
    if (population == 0) config_error("population must be positive");
    if (verifiers == 0) config_error("need at least one verifier");
    if (params.bloom_bits == 0 || params.bloom_hashes == 0) config_error("bloom parameters must be positive");
    if (sync.kind == SyncPolicyKind::Sampled && (sync.sample == 0 || sync.sample > population)) {
        config_error("sample size must be in [1, population]");
    }
    if (method == MethodKind::CompressedBitList && params.capacity != 0 && params.capacity < population) {
        config_error("status list capacity below population");
    }
    auto check_entries = [&](const Schedule& s, const char* what) {
        for (const auto& e : s.entries) {
            if (e.epoch == 0 || e.epoch > epochs) config_error(std::string(what) + " entry outside [1, epochs]");
            if (e.holder >= population) config_error(std::string(what) + " entry names an unknown holder");
            if (e.verifier >= verifiers) config_error(std::string(what) + " entry names an unknown verifier");
        }
    };
    check_entries(revocations, "revocation");
    check_entries(verifications, "verification");
    for (const auto& ev : script) {
        if (ev.kind != EventKind::Advance && ev.holder >= population) config_error("script names an unknown holder");
        if (ev.kind == EventKind::Verify && ev.verifier >= verifiers) config_error("script names an unknown verifier");
    }
    if (script.empty() && epochs == 0) config_error("generated runs need at least one epoch");
}

Scenario parse_scenario(std::string_view json_text) {
    // nlohmann keeps the last of duplicated keys; reject them instead
    std::vector<std::set<std::string>> open_objects;
    std::string duplicate;
    const json::parser_callback_t track_keys = [&](int, json::parse_event_t event, json& parsed) {
        switch (event) {
            case json::parse_event_t::object_start: open_objects.emplace_back(); break;
            case json::parse_event_t::object_end: open_objects.pop_back(); break;
            case json::parse_event_t::key:
                if (!open_objects.back().insert(parsed.get<std::string>()).second && duplicate.empty()) {
                    duplicate = parsed.get<std::string>();
                }
                break;
            default: break;
        }
        return true;
    };
    json j;
    try {
        j = json::parse(json_text, track_keys);
    } catch (const json::parse_error& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    if (!duplicate.empty()) config_error("duplicate field '" + duplicate + "'");
    check_keys(j,
               {"method", "population", "epochs", "seed", "verifiers", "sync", "revocations", "verifications",
                "script", "profile", "id_mode", "max_age", "capacity", "bloom_bits", "bloom_hashes", "trapdoor",
                "claim_count", "retain_payloads", "audit"},
               "scenario");
    if (!j.contains("method")) config_error("missing field 'method'");

    Scenario s;
    s.method = parse_method(get_as<std::string>(j, "method"));
    if (j.contains("population")) s.population = get_as<std::uint64_t>(j, "population");
    if (j.contains("epochs")) s.epochs = get_as<std::uint64_t>(j, "epochs");
    if (j.contains("seed")) s.seed = get_as<std::uint64_t>(j, "seed");
    if (j.contains("verifiers")) s.verifiers = get_as<std::uint32_t>(j, "verifiers");
    if (j.contains("sync")) s.sync = parse_sync_policy(get_as<std::string>(j, "sync"));
    if (j.contains("revocations")) s.revocations = parse_schedule(j["revocations"], "revocations");
    if (j.contains("verifications")) s.verifications = parse_schedule(j["verifications"], "verifications");
    if (j.contains("script")) {
        if (!j["script"].is_array()) config_error("script must be an array");
        for (const auto& e : j["script"]) {
            check_keys(e, {"op", "holder", "verifier"}, "script event");
            ScriptEvent ev;
            ev.kind = parse_event_kind(get_as<std::string>(e, "op"));
            if (e.contains("holder")) ev.holder = get_as<std::uint64_t>(e, "holder");
            if (e.contains("verifier")) ev.verifier = get_as<std::uint32_t>(e, "verifier");
            s.script.push_back(ev);
        }
    }
    if (j.contains("profile")) {
        try {
            s.params.profile = parse_profile(get_as<std::string>(j, "profile"));
        } catch (const Error& e) {
            config_error(e.what());
        }
    }
    if (j.contains("id_mode")) s.params.id_mode = parse_id_mode(get_as<std::string>(j, "id_mode"));
    if (j.contains("max_age")) s.params.max_age = get_as<std::uint64_t>(j, "max_age");
    if (j.contains("capacity")) s.params.capacity = get_as<std::uint64_t>(j, "capacity");
    if (j.contains("bloom_bits")) s.params.bloom_bits = get_as<std::uint64_t>(j, "bloom_bits");
    if (j.contains("bloom_hashes")) s.params.bloom_hashes = get_as<std::uint32_t>(j, "bloom_hashes");
    if (j.contains("trapdoor")) s.params.trapdoor = get_as<bool>(j, "trapdoor");
    if (j.contains("claim_count")) s.claim_count = get_as<std::uint32_t>(j, "claim_count");
    if (j.contains("retain_payloads")) s.retain_payloads = get_as<bool>(j, "retain_payloads");
    if (j.contains("audit")) s.audit = get_as<bool>(j, "audit");
    s.validate();
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    auto script = nlohmann::ordered_json::array();
    for (const auto& ev : s.script) {
        nlohmann::ordered_json o;
        o["op"] = std::string(to_string(ev.kind));
        if (ev.kind != EventKind::Advance) o["holder"] = ev.holder;
        if (ev.kind == EventKind::Verify) o["verifier"] = ev.verifier;
        script.push_back(std::move(o));
    }
    nlohmann::ordered_json out;  // keeps the documented field order
    out["method"] = std::string(to_string(s.method));
    out["population"] = s.population;
    out["epochs"] = s.epochs;
    out["seed"] = s.seed;
    out["verifiers"] = s.verifiers;
    out["sync"] = to_string(s.sync);
    out["revocations"] = schedule_json(s.revocations, false);
    out["verifications"] = schedule_json(s.verifications, true);
    out["script"] = script;
    out["profile"] = std::string(to_string(s.params.profile));
    out["id_mode"] = std::string(to_string(s.params.id_mode));
    out["max_age"] = s.params.max_age;
    out["capacity"] = s.params.capacity;
    out["bloom_bits"] = s.params.bloom_bits;
    out["bloom_hashes"] = s.params.bloom_hashes;
    out["trapdoor"] = s.params.trapdoor;
    out["claim_count"] = s.claim_count;
    out["retain_payloads"] = s.retain_payloads;
    out["audit"] = s.audit;
    return out.dump(2) + "\n";
}

}  // namespace revoc
