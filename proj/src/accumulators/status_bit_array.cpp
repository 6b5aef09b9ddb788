#include "revoc/accumulators/status_bit_array.hpp"

#include <bit>

#include "revoc/core/errors.hpp"
#include "revoc/core/serialization.hpp"

namespace revoc {

StatusBitArray::StatusBitArray(std::uint64_t capacity, LogicalTime epoch)
    : capacity_(capacity), epoch_(epoch), payload_((capacity + 7) / 8, 0) {}

void StatusBitArray::set(std::uint64_t ordinal, bool revoked) {
    if (ordinal >= capacity_) {
        throw Error(ErrorCode::OutOfRange, "status ordinal beyond capacity");
    }
    const auto mask = static_cast<std::uint8_t>(1U << (ordinal % 8));
    if (revoked) {
        payload_[ordinal / 8] |= mask;
    } else {
        payload_[ordinal / 8] &= static_cast<std::uint8_t>(~mask);
    }
}

bool StatusBitArray::get(std::uint64_t ordinal) const {
    if (ordinal >= capacity_) {
        throw Error(ErrorCode::OutOfRange, "status ordinal beyond capacity");
    }
    return (payload_[ordinal / 8] >> (ordinal % 8)) & 1U;
}

std::uint64_t StatusBitArray::revoked_count() const {
    std::uint64_t total = 0;
    for (auto b : payload_) {
        total += static_cast<std::uint64_t>(std::popcount(b));
    }
    return total;
}

Bytes StatusBitArray::serialize() const {
    Writer w;
    w.tag('S').raw_u64(capacity_).raw_u64(epoch_.epoch).raw(payload_);
    return std::move(w).take();
}

StatusBitArray StatusBitArray::parse(ByteView data) {
    Reader r(data);
    r.expect_tag('S');
    const auto capacity = r.raw_u64();
    const auto epoch = r.raw_u64();
    if (r.remaining() != (capacity + 7) / 8) {
        throw Error(ErrorCode::Malformed, "status payload does not match capacity");
    }
    StatusBitArray arr(capacity, LogicalTime{epoch});
    auto payload = r.raw(r.remaining());
    arr.payload_.assign(payload.begin(), payload.end());
    if (capacity % 8 != 0 && (arr.payload_.back() >> (capacity % 8)) != 0) {
        throw Error(ErrorCode::Malformed, "status padding bits set");
    }
    return arr;
}

}  // namespace revoc
