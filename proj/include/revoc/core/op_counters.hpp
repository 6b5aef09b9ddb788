#pragma once

#include <cstdint>

namespace revoc {

/// Abstract operation counts, maintained per thread. Scenarios are
/// single-threaded so the counters of the running thread describe the
/// scenario exactly.
struct OpCounters {
    std::uint64_t hashes = 0;
    std::uint64_t modexps = 0;
    std::uint64_t signatures = 0;
    std::uint64_t signature_checks = 0;
    std::uint64_t prime_searches = 0;

    OpCounters operator-(const OpCounters& o) const {
        return {hashes - o.hashes, modexps - o.modexps, signatures - o.signatures,
                signature_checks - o.signature_checks, prime_searches - o.prime_searches};
    }
    bool operator==(const OpCounters&) const = default;
};

OpCounters& op_counters();

}  // namespace revoc
