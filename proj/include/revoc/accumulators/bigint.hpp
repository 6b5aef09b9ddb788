#pragma once

#include <vector>

#include <gmpxx.h>

#include "revoc/core/bytes.hpp"

namespace revoc {

/// Big-endian, left-padded to `width` bytes. Throws if the value does not fit.
Bytes to_fixed_bytes(const mpz_class& value, std::size_t width);
/// Minimal big-endian encoding (empty for zero).
Bytes to_bytes(const mpz_class& value);
mpz_class from_bytes(ByteView data);

/// base^exponent mod modulus. Negative exponents use the modular inverse of
/// the base, which must exist.
mpz_class powm(const mpz_class& base, const mpz_class& exponent, const mpz_class& modulus);

/// Product of all values, computed as a balanced product tree.
mpz_class product(std::vector<mpz_class> values);

}  // namespace revoc
