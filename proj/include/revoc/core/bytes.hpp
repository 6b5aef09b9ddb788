#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace revoc {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline void append(Bytes& out, ByteView more) {
    out.insert(out.end(), more.begin(), more.end());
}

inline Bytes concat(std::initializer_list<ByteView> parts) {
    Bytes out;
    for (auto p : parts) {
        append(out, p);
    }
    return out;
}

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

/// Fixed 32-byte identifier, tagged so that credential, issuer and holder ids
/// cannot be mixed up.
template <class Tag>
struct Id32 {
    std::array<std::uint8_t, 32> bytes{};

    ByteView view() const { return bytes; }
    std::string hex() const { return to_hex(bytes); }

    static Id32 from(ByteView b);

    auto operator<=>(const Id32&) const = default;
};

template <class Tag>
Id32<Tag> Id32<Tag>::from(ByteView b) {
    Id32 id;
    if (b.size() != id.bytes.size()) {
        throw std::invalid_argument("Id32: expected 32 bytes");
    }
    std::copy(b.begin(), b.end(), id.bytes.begin());
    return id;
}

}  // namespace revoc
