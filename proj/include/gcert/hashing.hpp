#pragma once

#include "gcert/uint128.hpp"

#include <cstdint>
#include <span>

namespace gcert {

/// Position of a function inside the numbered family H_{k,ell}.
struct HashIndex {
    u128 value = 0;

    auto operator<=>(const HashIndex &) const = default;
};

/// ceil(k * e^k * log2(ell)), computed exactly; 1 when ell = 1.
///
/// Throws InvalidParams for k = 0, k > ell, or a result that does not fit in
/// 128 bits (k around 80 and beyond).
u128 family_size(std::uint64_t k, IdRange ell);

/// Fixed width of a HashIndex field: ceil(log2 family_size(k, ell)).
unsigned index_bits(std::uint64_t k, IdRange ell);

/// Member `index` of the mixer family applied to x, reduced into [0, buckets).
///
/// fin is the splitmix64 finaliser; x is split into 64-bit halves which are
/// finalised independently and folded with the finalised index word.
std::uint64_t eval_hash(HashIndex index, u128 x, std::uint64_t buckets);

/// Whether eval_hash(index, ., buckets) is injective on `set`.
bool is_perfect(HashIndex index, std::span<const u128> set, std::uint64_t buckets);

struct HashSearch {
    HashIndex index;
    std::uint64_t probes = 0; // candidate indices examined
};

/// Smallest index < family_size(|set|, ell) that is injective on `set` when
/// reducing into `buckets` (default |set|). Throws NoPerfectHash when the
/// family is exhausted and InvalidParams on bad arguments.
HashSearch search_perfect_hash(std::span<const u128> set, IdRange ell, std::uint64_t buckets = 0);

/// search_perfect_hash with k = |set| buckets.
HashIndex find_perfect_hash(std::span<const u128> set, std::uint64_t k, IdRange ell);

} // namespace gcert
