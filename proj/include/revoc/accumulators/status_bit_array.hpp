#pragma once

#include <cstdint>

#include "revoc/core/bytes.hpp"
#include "revoc/core/credential.hpp"

namespace revoc {

/// One bit per issuance ordinal; a set bit means revoked.
///
/// Wire layout: 'S' | capacity (u64 BE) | epoch (u64 BE) | ceil(capacity/8)
/// payload bytes, bit i in byte i/8 at position i%8. The size depends only on
/// the capacity.
class StatusBitArray {
public:
    static constexpr std::size_t kHeaderSize = 17;

    explicit StatusBitArray(std::uint64_t capacity, LogicalTime epoch = {});

    /// Throws OutOfRange for ordinal >= capacity.
    void set(std::uint64_t ordinal, bool revoked);
    bool get(std::uint64_t ordinal) const;

    std::uint64_t capacity() const { return capacity_; }
    std::uint64_t revoked_count() const;
    LogicalTime epoch() const { return epoch_; }
    void set_epoch(LogicalTime e) { epoch_ = e; }

    std::size_t payload_size() const { return payload_.size(); }
    std::size_t serialized_size() const { return kHeaderSize + payload_.size(); }
    Bytes serialize() const;
    static StatusBitArray parse(ByteView data);

    bool operator==(const StatusBitArray&) const = default;

private:
    std::uint64_t capacity_;
    LogicalTime epoch_;
    Bytes payload_;
};

}  // namespace revoc
