#include "gcert/uint128.hpp"

#include <algorithm>
#include <cctype>

namespace gcert {

std::string to_string(u128 v)
{
    if (v == 0)
        return "0";
    std::string out;
    while (v != 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::optional<u128> parse_u128(std::string_view text)
{
    if (text.empty())
        return std::nullopt;
    u128 value = 0;
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return std::nullopt;
        auto digit = static_cast<unsigned>(c - '0');
        if (value > (u128_max - digit) / 10)
            return std::nullopt;
        value = value * 10 + digit;
    }
    return value;
}

IdRange IdRange::power_of_two(unsigned exponent)
{
    if (exponent == 128)
        return full();
    return of(u128{1} << exponent);
}

std::optional<IdRange> IdRange::parse(std::string_view text)
{
    if (text.starts_with("2^")) {
        auto e = parse_u128(text.substr(2));
        if (!e || *e > 128)
            return std::nullopt;
        return power_of_two(static_cast<unsigned>(*e));
    }
    if (text == "340282366920938463463374607431768211456")
        return full();
    auto v = parse_u128(text);
    if (!v || *v == 0)
        return std::nullopt;
    return of(*v);
}

std::string IdRange::to_string() const
{
    if (last_ == u128_max)
        return "340282366920938463463374607431768211456";
    return gcert::to_string(last_ + 1);
}

} // namespace gcert
