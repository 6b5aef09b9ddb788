#pragma once

// Canonical binary encoding shared by every serialized object.
//
// Layout rules (all integers big-endian):
//   tag      1 raw byte identifying the object type
//   field    u32 length followed by that many bytes
//   u64      encoded as a field of length 8
// Objects are the concatenation of their fields in declared order, so the
// encoded size of an object is a pure function of its contents.

#include <cstdint>
#include <string>
#include <string_view>

#include "revoc/core/bytes.hpp"

namespace revoc {

class Writer {
public:
    Writer& tag(std::uint8_t t);
    Writer& field(ByteView data);
    Writer& field(std::string_view text) { return field(as_bytes(text)); }
    Writer& u64(std::uint64_t value);
    Writer& raw(ByteView data);
    Writer& raw_u64(std::uint64_t value);

    const Bytes& bytes() const& { return out_; }
    Bytes take() && { return std::move(out_); }
    std::size_t size() const { return out_.size(); }

private:
    Bytes out_;
};

class Reader {
public:
    explicit Reader(ByteView data) : data_(data) {}

    std::uint8_t tag();
    void expect_tag(std::uint8_t t);
    ByteView field();
    std::string string_field();
    std::uint64_t u64();
    ByteView raw(std::size_t n);
    std::uint64_t raw_u64();

    template <std::size_t N>
    std::array<std::uint8_t, N> fixed_field() {
        auto f = field();
        if (f.size() != N) {
            fail("fixed field has wrong length");
        }
        std::array<std::uint8_t, N> out{};
        std::copy(f.begin(), f.end(), out.begin());
        return out;
    }

    bool done() const { return pos_ == data_.size(); }
    std::size_t remaining() const { return data_.size() - pos_; }
    void expect_done();

private:
    [[noreturn]] void fail(const char* what) const;

    ByteView data_;
    std::size_t pos_ = 0;
};

void put_u32_be(Bytes& out, std::uint32_t v);
void put_u64_be(Bytes& out, std::uint64_t v);
std::uint64_t get_u64_be(ByteView in);

}  // namespace revoc
