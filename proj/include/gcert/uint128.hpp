#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gcert {

__extension__ typedef unsigned __int128 u128;

inline constexpr u128 u128_max = ~u128{0};

inline constexpr std::uint64_t low64(u128 v) { return static_cast<std::uint64_t>(v); }
inline constexpr std::uint64_t high64(u128 v) { return static_cast<std::uint64_t>(v >> 64); }

/// Number of bits needed to write v (0 for v == 0).
inline constexpr unsigned bit_width(u128 v)
{
    unsigned w = 0;
    while (v != 0) {
        v >>= 1;
        ++w;
    }
    return w;
}

std::string to_string(u128 v);

/// Parses a decimal literal; nullopt on empty input, stray characters or overflow.
std::optional<u128> parse_u128(std::string_view text);

/// An identifier range {0, ..., M-1} with 1 <= M <= 2^128.
///
/// Stored as M-1 so that the full 128-bit range stays representable.
class IdRange {
public:
    constexpr IdRange() = default;

    static constexpr IdRange of(u128 count) { return IdRange(count - 1); }
    static constexpr IdRange full() { return IdRange(u128_max); }
    static IdRange power_of_two(unsigned exponent);

    /// Accepts a decimal count up to 2^128 or the shorthand `2^e`.
    static std::optional<IdRange> parse(std::string_view text);

    constexpr u128 last() const { return last_; }
    constexpr bool contains(u128 id) const { return id <= last_; }
    constexpr bool holds_at_least(std::uint64_t n) const { return n == 0 || last_ >= u128{n} - 1; }
    /// ceil(log2 M): the fixed width of an identifier field.
    constexpr unsigned id_bits() const { return bit_width(last_); }
    /// M itself, or nullopt when M = 2^128.
    constexpr std::optional<u128> count() const
    {
        if (last_ == u128_max)
            return std::nullopt;
        return last_ + 1;
    }

    std::string to_string() const;

    constexpr auto operator<=>(const IdRange &) const = default;

private:
    constexpr explicit IdRange(u128 last) : last_(last) {}
    u128 last_ = 0;
};

} // namespace gcert
