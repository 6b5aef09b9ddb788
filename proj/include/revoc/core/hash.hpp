#pragma once

#include <string_view>

#include "revoc/core/bytes.hpp"

namespace revoc {

/// SHA-256, the single hash used everywhere in the toolkit.
Digest sha256(ByteView data);

/// SHA-256 over a domain label followed by the given parts.
Digest tagged_hash(std::string_view domain, std::initializer_list<ByteView> parts);

Digest hmac_sha256(ByteView key, ByteView message);

}  // namespace revoc
