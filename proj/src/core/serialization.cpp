#include "revoc/core/serialization.hpp"

#include <limits>

#include "revoc/core/errors.hpp"

namespace revoc {

void put_u32_be(Bytes& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void put_u64_be(Bytes& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) {
        out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

std::uint64_t get_u64_be(ByteView in) {
    std::uint64_t v = 0;
    for (auto b : in) {
        v = (v << 8) | b;
    }
    return v;
}

Writer& Writer::tag(std::uint8_t t) {
    out_.push_back(t);
    return *this;
}

Writer& Writer::field(ByteView data) {
    if (data.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::OutOfRange, "field longer than 4 GiB");
    }
    put_u32_be(out_, static_cast<std::uint32_t>(data.size()));
    append(out_, data);
    return *this;
}

Writer& Writer::u64(std::uint64_t value) {
    put_u32_be(out_, 8);
    put_u64_be(out_, value);
    return *this;
}

Writer& Writer::raw(ByteView data) {
    append(out_, data);
    return *this;
}

Writer& Writer::raw_u64(std::uint64_t value) {
    put_u64_be(out_, value);
    return *this;
}

void Reader::fail(const char* what) const {
    throw Error(ErrorCode::Malformed, what);
}

std::uint8_t Reader::tag() {
    if (remaining() < 1) {
        fail("truncated tag");
    }
    return data_[pos_++];
}

void Reader::expect_tag(std::uint8_t t) {
    if (tag() != t) {
        fail("unexpected object tag");
    }
}

ByteView Reader::field() {
    auto len_bytes = raw(4);
    auto len = static_cast<std::size_t>(get_u64_be(len_bytes));
    return raw(len);
}

std::string Reader::string_field() {
    auto f = field();
    return {f.begin(), f.end()};
}

std::uint64_t Reader::u64() {
    auto f = field();
    if (f.size() != 8) {
        fail("integer field must be 8 bytes");
    }
    return get_u64_be(f);
}

ByteView Reader::raw(std::size_t n) {
    if (remaining() < n) {
        fail("truncated field");
    }
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint64_t Reader::raw_u64() {
    return get_u64_be(raw(8));
}

void Reader::expect_done() {
    if (!done()) {
        fail("trailing bytes");
    }
}

}  // namespace revoc
