#pragma once

#include "gcert/uint128.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gcert {

/// A bit sequence packed MSB-first into bytes. Bits past size() in the last
/// byte are always zero, so bytes() is directly the padded wire form.
class BitString {
public:
    BitString() = default;

    /// Every bit of every byte, i.e. size() == 8 * bytes.size().
    static BitString from_bytes(std::span<const std::uint8_t> bytes);
    /// Parses a string of '0'/'1' characters.
    static BitString from_string(std::string_view bits);

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    bool operator[](std::size_t i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u; }

    void push_back(bool bit);
    /// Appends the low `width` bits of value, most significant first.
    void append(u128 value, unsigned width);
    void append(const BitString &other);
    /// Drops everything from bit `n` on.
    void truncate(std::size_t n);

    std::span<const std::uint8_t> bytes() const { return bytes_; }
    std::string to_string() const;

    bool operator==(const BitString &) const = default;

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t size_ = 0;
};

/// Sequential reader; every out-of-bounds read throws MalformedCertificate.
class BitReader {
public:
    explicit BitReader(const BitString &bits) : bits_(bits) {}

    bool read_bit();
    /// Reads `width` (<= 128) bits MSB-first.
    u128 read(unsigned width);
    /// Elias gamma: floor(log2 n) zeros, then n in binary. Values beyond 64 bits are malformed.
    std::uint64_t read_gamma();

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bits_.size() - pos_; }
    bool at_end() const { return pos_ == bits_.size(); }

private:
    const BitString &bits_;
    std::size_t pos_ = 0;
};

void write_gamma(BitString &out, std::uint64_t n);
std::size_t gamma_length(std::uint64_t n);

} // namespace gcert
