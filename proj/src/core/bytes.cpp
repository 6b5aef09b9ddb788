#include "revoc/core/bytes.hpp"

#include <stdexcept>

#include "revoc/core/errors.hpp"

namespace revoc {

std::string to_hex(ByteView data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) {
        throw Error(ErrorCode::Malformed, "odd-length hex string");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = nibble(hex[i]);
        int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw Error(ErrorCode::Malformed, "invalid hex digit");
        }
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::AlreadyMember: return "AlreadyMember";
        case ErrorCode::NotMember: return "NotMember";
        case ErrorCode::MemberRevoked: return "MemberRevoked";
        case ErrorCode::NotPresent: return "NotPresent";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::AccessDenied: return "AccessDenied";
        case ErrorCode::Revoked: return "Revoked";
        case ErrorCode::Unauthorized: return "Unauthorized";
        case ErrorCode::UnknownIssuer: return "UnknownIssuer";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::Incomplete: return "Incomplete";
        case ErrorCode::Malformed: return "Malformed";
    }
    return "Unknown";
}

}  // namespace revoc
