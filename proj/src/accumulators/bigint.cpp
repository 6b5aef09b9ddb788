#include "revoc/accumulators/bigint.hpp"

#include "revoc/core/errors.hpp"
#include "revoc/core/op_counters.hpp"

namespace revoc {

Bytes to_bytes(const mpz_class& value) {
    if (value < 0) {
        throw Error(ErrorCode::OutOfRange, "negative integers have no byte encoding");
    }
    std::size_t count = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
    if (value == 0) {
        return {};
    }
    Bytes out(count);
    mpz_export(out.data(), &count, 1, 1, 1, 0, value.get_mpz_t());
    out.resize(count);
    return out;
}

Bytes to_fixed_bytes(const mpz_class& value, std::size_t width) {
    auto raw = to_bytes(value);
    if (raw.size() > width) {
        throw Error(ErrorCode::OutOfRange, "integer does not fit the fixed width");
    }
    Bytes out(width - raw.size(), 0);
    append(out, raw);
    return out;
}

mpz_class from_bytes(ByteView data) {
    mpz_class out;
    if (!data.empty()) {
        mpz_import(out.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
    }
    return out;
}

mpz_class powm(const mpz_class& base, const mpz_class& exponent, const mpz_class& modulus) {
    ++op_counters().modexps;
    mpz_class out;
    if (exponent >= 0) {
        mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
        return out;
    }
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), base.get_mpz_t(), modulus.get_mpz_t()) == 0) {
        throw Error(ErrorCode::OutOfRange, "base is not invertible modulo n");
    }
    mpz_class pos = -exponent;
    mpz_powm(out.get_mpz_t(), inv.get_mpz_t(), pos.get_mpz_t(), modulus.get_mpz_t());
    return out;
}

mpz_class product(std::vector<mpz_class> values) {
    if (values.empty()) {
        return 1;
    }
    while (values.size() > 1) {
        std::vector<mpz_class> next;
        next.reserve((values.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < values.size(); i += 2) {
            next.emplace_back(values[i] * values[i + 1]);
        }
        if (values.size() % 2 == 1) {
            next.emplace_back(std::move(values.back()));
        }
        values = std::move(next);
    }
    return values.front();
}

}  // namespace revoc
