#pragma once

#include <cstdint>
#include <vector>

#include "revoc/core/bytes.hpp"

namespace revoc {

enum class BloomAnswer : std::uint8_t { DefinitelyNot, Maybe };

/// Bloom filter over m bits with k probe positions per item, derived by double
/// hashing from one SHA-256 of the item.
///
/// Serialized as tag 'B', m, k, n (u64 fields) and the packed bit payload.
class BloomFilter {
public:
    BloomFilter(std::uint64_t bits, std::uint32_t hash_count);

    void insert(ByteView item);
    BloomAnswer query(ByteView item) const;
    bool maybe_contains(ByteView item) const { return query(item) == BloomAnswer::Maybe; }

    std::uint64_t bit_count() const { return bits_; }
    std::uint32_t hash_count() const { return hash_count_; }
    std::uint64_t inserted_count() const { return inserted_; }
    std::uint64_t popcount() const;

    /// (1 - e^(-k n / m))^k for the current n.
    double analytic_fpr() const { return analytic_fpr(bits_, hash_count_, inserted_); }
    static double analytic_fpr(std::uint64_t m, std::uint32_t k, std::uint64_t n);

    Bytes serialize() const;
    static BloomFilter parse(ByteView data);

    bool operator==(const BloomFilter&) const = default;

private:
    std::vector<std::uint64_t> positions(ByteView item) const;

    std::uint64_t bits_;
    std::uint32_t hash_count_;
    std::uint64_t inserted_ = 0;
    Bytes payload_;
};

}  // namespace revoc
