#pragma once

#include <memory>

#include "revoc/methods/method.hpp"

namespace revoc::detail {

#define REVOC_DECLARE_METHOD(name)                                                                        \
    std::unique_ptr<IssuerAgent> make_##name##_issuer(Issuer identity, const MethodParams& params);       \
    std::unique_ptr<HolderAgent> make_##name##_holder(SigningKey key, Digest secret,                       \
                                                      const MethodParams& params);                         \
    std::unique_ptr<VerifierAgent> make_##name##_verifier(const MethodParams& params);

REVOC_DECLARE_METHOD(simple_list)
REVOC_DECLARE_METHOD(hidden_list)
REVOC_DECLARE_METHOD(bitlist)
REVOC_DECLARE_METHOD(bloom)
REVOC_DECLARE_METHOD(rsa)
REVOC_DECLARE_METHOD(merkle)
REVOC_DECLARE_METHOD(update)
REVOC_DECLARE_METHOD(lvvc)

#undef REVOC_DECLARE_METHOD

/// Single-byte status answers.
inline constexpr std::uint8_t kStatusValid = 0;
inline constexpr std::uint8_t kStatusRevoked = 1;
inline constexpr std::uint8_t kNotModified = 'N';

}  // namespace revoc::detail
