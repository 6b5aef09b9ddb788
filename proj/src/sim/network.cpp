#include "revoc/sim/network.hpp"

#include "revoc/core/errors.hpp"
#include "revoc/core/serialization.hpp"

namespace revoc {
namespace {

Bytes error_frame(const Error& e) {
    Writer w;
    w.tag('E').u64(static_cast<std::uint64_t>(e.code())).field(std::string_view(e.what()));
    return std::move(w).take();
}

}  // namespace

void Network::record(ActorRef from, ActorRef to, Phase phase, Topic topic, ByteView payload, bool error) {
    LedgerRecord r;
    r.from = from;
    r.to = to;
    r.phase = phase;
    r.topic = topic;
    r.payload_bytes = payload.size();
    r.epoch = now_.epoch;
    r.scenario_seed = seed_;
    r.error = error;
    if (retain_) {
        r.payload.assign(payload.begin(), payload.end());
    }
    ledger_.append(std::move(r));
}

Bytes Network::call(ActorRef from, ActorRef to, Phase phase, Topic request_topic, ByteView request,
                    Topic response_topic, const Handler& handler) {
    record(from, to, phase, request_topic, request, false);
    Bytes response;
    try {
        response = handler(request);
    } catch (const Error& e) {
        record(to, from, phase, response_topic, error_frame(e), true);
        throw;
    }
    record(to, from, phase, response_topic, response, false);
    return response;
}

void Network::send(ActorRef from, ActorRef to, Phase phase, Topic topic, ByteView payload) {
    record(from, to, phase, topic, payload, false);
}

void Network::note_local(ActorRef actor, Phase phase, Topic topic) {
    LedgerRecord r;
    r.from = actor;
    r.to = actor;
    r.phase = phase;
    r.topic = topic;
    r.payload_bytes = 0;
    r.epoch = now_.epoch;
    r.scenario_seed = seed_;
    ledger_.append(std::move(r));
}

const Publication* PublicBoard::find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : it->second.get();
}

std::uint64_t PublicBoard::storage_bytes() const {
    return serialize_state().size();
}

Bytes PublicBoard::serialize_state() const {
    Writer w;
    w.tag('R').u64(entries_.size());
    for (const auto& [key, pub] : entries_) {
        w.field(std::string_view(key)).field(pub->serialize());
    }
    return std::move(w).take();
}

}  // namespace revoc
