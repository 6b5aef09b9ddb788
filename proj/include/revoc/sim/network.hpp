#pragma once

// In-process message bus. Every cross-actor exchange goes through here and is
// appended to the ledger before the receiver sees it.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "revoc/core/credential.hpp"
#include "revoc/sim/ledger.hpp"

namespace revoc {

class Network {
public:
    using Handler = std::function<Bytes(ByteView request)>;

    Network(std::uint64_t scenario_seed, bool retain_payloads)
        : seed_(scenario_seed), retain_(retain_payloads) {}

    void set_epoch(LogicalTime now) { now_ = now; }
    LogicalTime now() const { return now_; }

    /// Request/response exchange. Errors thrown by the handler travel back as
    /// an error frame (recorded) and are rethrown to the caller.
    Bytes call(ActorRef from, ActorRef to, Phase phase, Topic request_topic, ByteView request,
               Topic response_topic, const Handler& handler);

    void send(ActorRef from, ActorRef to, Phase phase, Topic topic, ByteView payload);

    /// Actor-internal state change with no counterpart.
    void note_local(ActorRef actor, Phase phase, Topic topic);

    const Ledger& ledger() const { return ledger_; }

private:
    void record(ActorRef from, ActorRef to, Phase phase, Topic topic, ByteView payload, bool error);

    std::uint64_t seed_;
    bool retain_;
    LogicalTime now_;
    Ledger ledger_;
};

/// Data the issuer makes public through the trust layer.
class Publication {
public:
    virtual ~Publication() = default;
    /// Answers a read request from any actor.
    virtual Bytes answer(ByteView request) const = 0;
    /// Canonical encoding of what the registry stores.
    virtual Bytes serialize() const = 0;
};

class PublicBoard {
public:
    /// Returns the entry under `key`, creating it on first use.
    template <typename T, typename... Args>
    T& ensure(const std::string& key, Args&&... args) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            it = entries_.emplace(key, std::make_unique<T>(std::forward<Args>(args)...)).first;
        }
        return dynamic_cast<T&>(*it->second);
    }
    const Publication* find(const std::string& key) const;
    std::uint64_t storage_bytes() const;
    Bytes serialize_state() const;

private:
    std::map<std::string, std::unique_ptr<Publication>> entries_;
};

}  // namespace revoc
