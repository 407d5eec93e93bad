#pragma once

#include "gcert/bits.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace gcert {

/// Wire tags of the certificate file format.
enum class Scheme : std::uint8_t {
    bitmap = 0x01,
    idlist = 0x02,
    hash = 0x03,
};

std::string_view scheme_name(Scheme s);
std::optional<Scheme> parse_scheme(std::string_view name);

/// The single global certificate shared by every node.
struct Certificate {
    Scheme scheme = Scheme::hash;
    BitString payload;

    bool operator==(const Certificate &) const = default;
};

/// Payload bits only; the tag byte and file padding are not counted.
inline std::uint64_t certificate_size_bits(const Certificate &cert) { return cert.payload.size(); }

/// Tag byte followed by the payload packed MSB-first and zero-padded.
std::vector<std::uint8_t> serialize_certificate(const Certificate &cert);

/// Inverse of serialize_certificate up to padding: the payload keeps all
/// 8*(len-1) bits. Use strip_padding (schemes.hpp) to recover the exact payload.
Certificate deserialize_certificate(std::span<const std::uint8_t> bytes);

std::string to_hex(std::span<const std::uint8_t> bytes);

} // namespace gcert
