#pragma once

#include <optional>

#include "revoc/core/bytes.hpp"

namespace revoc {

/// Ideal stand-in for a zero-knowledge presentation layer.
///
/// In pairwise mode a holder hands its proof material to the verifier inside
/// a sealed envelope. The verifier opens it through this object and runs the
/// ordinary checks, but the bytes that cross the wire are a keystream
/// encryption bound to the presentation nonce, so two presentations of the
/// same credential share no stable byte sequence. Opening under a different
/// nonce fails authentication.
class PresentationSealer {
public:
    static constexpr std::size_t kTagSize = 32;

    explicit PresentationSealer(const Digest& key) : key_(key) {}

    Bytes seal(ByteView nonce, ByteView plaintext) const;
    std::optional<Bytes> open(ByteView nonce, ByteView sealed) const;

private:
    void apply_keystream(ByteView nonce, Bytes& data) const;

    Digest key_;
};

}  // namespace revoc
