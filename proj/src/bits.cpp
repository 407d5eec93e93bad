#include "gcert/bits.hpp"
#include "gcert/certificate.hpp"
#include "gcert/errors.hpp"

namespace gcert {

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes)
{
    BitString out;
    out.bytes_.assign(bytes.begin(), bytes.end());
    out.size_ = bytes.size() * 8;
    return out;
}

BitString BitString::from_string(std::string_view bits)
{
    BitString out;
    for (char c : bits) {
        if (c != '0' && c != '1')
            throw ParseError("bit string may only contain '0' and '1'");
        out.push_back(c == '1');
    }
    return out;
}

void BitString::push_back(bool bit)
{
    if ((size_ & 7) == 0)
        bytes_.push_back(0);
    if (bit)
        bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (size_ & 7));
    ++size_;
}

void BitString::append(u128 value, unsigned width)
{
    for (unsigned i = width; i-- > 0;)
        push_back((value >> i) & 1);
}

void BitString::append(const BitString &other)
{
    for (std::size_t i = 0; i < other.size(); ++i)
        push_back(other[i]);
}

void BitString::truncate(std::size_t n)
{
    if (n >= size_)
        return;
    size_ = n;
    bytes_.resize((n + 7) / 8);
    if (n & 7)
        bytes_.back() &= static_cast<std::uint8_t>(0xFFu << (8 - (n & 7)));
}

std::string BitString::to_string() const
{
    std::string out;
    out.reserve(size_);
    for (std::size_t i = 0; i < size_; ++i)
        out.push_back((*this)[i] ? '1' : '0');
    return out;
}

bool BitReader::read_bit()
{
    if (pos_ >= bits_.size())
        throw MalformedCertificate("payload truncated");
    return bits_[pos_++];
}

u128 BitReader::read(unsigned width)
{
    if (width > 128)
        throw MalformedCertificate("field wider than 128 bits");
    if (remaining() < width)
        throw MalformedCertificate("payload truncated");
    u128 v = 0;
    for (unsigned i = 0; i < width; ++i)
        v = (v << 1) | static_cast<unsigned>(bits_[pos_++]);
    return v;
}

std::uint64_t BitReader::read_gamma()
{
    unsigned zeros = 0;
    while (!read_bit()) {
        if (++zeros > 63)
            throw MalformedCertificate("gamma code exceeds 64 bits");
    }
    return static_cast<std::uint64_t>((u128{1} << zeros) | read(zeros));
}

void write_gamma(BitString &out, std::uint64_t n)
{
    if (n == 0)
        throw InvalidParams("gamma code needs a positive integer");
    unsigned width = bit_width(n);
    out.append(0, width - 1);
    out.append(n, width);
}

std::size_t gamma_length(std::uint64_t n) { return 2 * bit_width(n) - 1; }

std::string_view scheme_name(Scheme s)
{
    switch (s) {
    case Scheme::bitmap:
        return "bitmap";
    case Scheme::idlist:
        return "idlist";
    case Scheme::hash:
        return "hash";
    }
    return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name)
{
    if (name == "bitmap")
        return Scheme::bitmap;
    if (name == "idlist")
        return Scheme::idlist;
    if (name == "hash")
        return Scheme::hash;
    return std::nullopt;
}

std::vector<std::uint8_t> serialize_certificate(const Certificate &cert)
{
    std::vector<std::uint8_t> out;
    out.reserve(1 + cert.payload.bytes().size());
    out.push_back(static_cast<std::uint8_t>(cert.scheme));
    out.insert(out.end(), cert.payload.bytes().begin(), cert.payload.bytes().end());
    return out;
}

Certificate deserialize_certificate(std::span<const std::uint8_t> bytes)
{
    if (bytes.empty())
        throw MalformedCertificate("empty certificate file");
    auto tag = bytes[0];
    if (tag < 0x01 || tag > 0x03)
        throw MalformedCertificate("unknown scheme tag");
    return {static_cast<Scheme>(tag), BitString::from_bytes(bytes.subspan(1))};
}

std::string to_hex(std::span<const std::uint8_t> bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

} // namespace gcert
