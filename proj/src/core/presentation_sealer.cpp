#include "revoc/core/presentation_sealer.hpp"

#include <sodium.h>

#include "revoc/core/hash.hpp"
#include "revoc/core/serialization.hpp"

namespace revoc {

void PresentationSealer::apply_keystream(ByteView nonce, Bytes& data) const {
    std::uint64_t block = 0;
    for (std::size_t offset = 0; offset < data.size(); offset += 32, ++block) {
        auto label = as_bytes("keystream");
        Bytes input(label.begin(), label.end());
        append(input, nonce);
        put_u64_be(input, block);
        auto ks = hmac_sha256(key_, input);
        for (std::size_t i = 0; i < 32 && offset + i < data.size(); ++i) {
            data[offset + i] ^= ks[i];
        }
    }
}

Bytes PresentationSealer::seal(ByteView nonce, ByteView plaintext) const {
    Bytes out(plaintext.begin(), plaintext.end());
    apply_keystream(nonce, out);
    auto tag = hmac_sha256(key_, concat({as_bytes("tag"), nonce, out}));
    append(out, tag);
    return out;
}

std::optional<Bytes> PresentationSealer::open(ByteView nonce, ByteView sealed) const {
    if (sealed.size() < kTagSize) {
        return std::nullopt;
    }
    auto body = sealed.first(sealed.size() - kTagSize);
    auto tag = sealed.last(kTagSize);
    auto expect = hmac_sha256(key_, concat({as_bytes("tag"), nonce, body}));
    if (sodium_memcmp(expect.data(), tag.data(), kTagSize) != 0) {
        return std::nullopt;
    }
    Bytes out(body.begin(), body.end());
    apply_keystream(nonce, out);
    return out;
}

}  // namespace revoc
