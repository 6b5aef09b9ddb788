#include "revoc/accumulators/bloom_filter.hpp"

#include <bit>
#include <cmath>

#include "revoc/core/errors.hpp"
#include "revoc/core/hash.hpp"
#include "revoc/core/serialization.hpp"

namespace revoc {

BloomFilter::BloomFilter(std::uint64_t bits, std::uint32_t hash_count)
    : bits_(bits), hash_count_(hash_count), payload_((bits + 7) / 8, 0) {
    if (bits == 0 || hash_count == 0) {
        throw Error(ErrorCode::ConfigError, "bloom filter needs m > 0 and k > 0");
    }
}

std::vector<std::uint64_t> BloomFilter::positions(ByteView item) const {
    const auto d = tagged_hash("bloom", {item});
    const std::uint64_t h1 = get_u64_be(ByteView(d.data(), 8));
    const std::uint64_t h2 = get_u64_be(ByteView(d.data() + 8, 8)) | 1U;
    std::vector<std::uint64_t> out(hash_count_);
    for (std::uint32_t i = 0; i < hash_count_; ++i) {
        out[i] = (h1 + i * h2) % bits_;
    }
    return out;
}

void BloomFilter::insert(ByteView item) {
    for (auto pos : positions(item)) {
        payload_[pos / 8] |= static_cast<std::uint8_t>(1U << (pos % 8));
    }
    ++inserted_;
}

BloomAnswer BloomFilter::query(ByteView item) const {
    for (auto pos : positions(item)) {
        if ((payload_[pos / 8] & (1U << (pos % 8))) == 0) {
            return BloomAnswer::DefinitelyNot;
        }
    }
    return BloomAnswer::Maybe;
}

std::uint64_t BloomFilter::popcount() const {
    std::uint64_t total = 0;
    for (auto b : payload_) {
        total += static_cast<std::uint64_t>(std::popcount(b));
    }
    return total;
}

double BloomFilter::analytic_fpr(std::uint64_t m, std::uint32_t k, std::uint64_t n) {
    return std::pow(1.0 - std::exp(-static_cast<double>(k) * static_cast<double>(n) / static_cast<double>(m)),
                    static_cast<double>(k));
}

Bytes BloomFilter::serialize() const {
    Writer w;
    w.tag('B').u64(bits_).u64(hash_count_).u64(inserted_).field(payload_);
    return std::move(w).take();
}

BloomFilter BloomFilter::parse(ByteView data) {
    Reader r(data);
    r.expect_tag('B');
    const auto m = r.u64();
    const auto k = r.u64();
    if (k == 0 || k > 64) {
        throw Error(ErrorCode::Malformed, "bloom hash count out of range");
    }
    BloomFilter f(m, static_cast<std::uint32_t>(k));
    f.inserted_ = r.u64();
    auto payload = r.field();
    if (payload.size() != f.payload_.size()) {
        throw Error(ErrorCode::Malformed, "bloom payload has wrong length");
    }
    f.payload_.assign(payload.begin(), payload.end());
    r.expect_done();
    return f;
}

}  // namespace revoc
