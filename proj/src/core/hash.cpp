#include "revoc/core/hash.hpp"

#include <sodium.h>

#include "revoc/core/op_counters.hpp"
#include "sodium_init.hpp"

namespace revoc {

OpCounters& op_counters() {
    thread_local OpCounters counters;
    return counters;
}

Digest sha256(ByteView data) {
    detail::ensure_sodium();
    ++op_counters().hashes;
    Digest out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

Digest tagged_hash(std::string_view domain, std::initializer_list<ByteView> parts) {
    ++op_counters().hashes;
    crypto_hash_sha256_state st;
    crypto_hash_sha256_init(&st);
    auto d = as_bytes(domain);
    std::uint8_t len = static_cast<std::uint8_t>(d.size());
    crypto_hash_sha256_update(&st, &len, 1);
    crypto_hash_sha256_update(&st, d.data(), d.size());
    for (auto p : parts) {
        crypto_hash_sha256_update(&st, p.data(), p.size());
    }
    Digest out{};
    crypto_hash_sha256_final(&st, out.data());
    return out;
}

Digest hmac_sha256(ByteView key, ByteView message) {
    ++op_counters().hashes;
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key.data(), key.size());
    crypto_auth_hmacsha256_update(&st, message.data(), message.size());
    Digest out{};
    crypto_auth_hmacsha256_final(&st, out.data());
    return out;
}

}  // namespace revoc
