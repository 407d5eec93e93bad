#include "gcert/hashing.hpp"
#include "gcert/errors.hpp"

#include <mpfr.h>

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gcert {

namespace {

struct MpfrVar {
    mpfr_t v;
    explicit MpfrVar(mpfr_prec_t prec) { mpfr_init2(v, prec); }
    ~MpfrVar() { mpfr_clear(v); }
    MpfrVar(const MpfrVar &) = delete;
    MpfrVar &operator=(const MpfrVar &) = delete;
};

// k * e^k * log2(ell) rounded towards `rnd`; every step is monotone in its
// inputs (all quantities positive), so directed rounding gives a true bound.
void bound_family_value(mpfr_t out, std::uint64_t k, IdRange ell, mpfr_prec_t prec, mpfr_rnd_t rnd)
{
    MpfrVar m(prec), e(prec);
    u128 last = ell.last();
    mpfr_set_ui(m.v, high64(last), MPFR_RNDN);
    mpfr_mul_2ui(m.v, m.v, 64, MPFR_RNDN);
    mpfr_add_ui(m.v, m.v, low64(last), MPFR_RNDN);
    mpfr_add_ui(m.v, m.v, 1, MPFR_RNDN); // exact: prec >= 256 > 129 bits
    mpfr_log2(m.v, m.v, rnd);
    mpfr_set_ui(e.v, k, MPFR_RNDN);
    mpfr_exp(e.v, e.v, rnd);
    mpfr_mul(out, m.v, e.v, rnd);
    mpfr_mul_ui(out, out, k, rnd);
}

std::optional<u128> ceil_to_u128(mpfr_t value)
{
    mpfr_ceil(value, value);
    if (mpfr_get_exp(value) > 128)
        return std::nullopt;
    char *digits = nullptr;
    mpfr_asprintf(&digits, "%.0Rf", value);
    std::unique_ptr<char, decltype(&mpfr_free_str)> guard(digits, &mpfr_free_str);
    return parse_u128(digits);
}

u128 compute_family_size(std::uint64_t k, IdRange ell)
{
    if (ell == IdRange::of(1))
        return 1;
    std::optional<u128> answer;
    for (mpfr_prec_t prec = 256; prec <= 8192; prec *= 2) {
        MpfrVar lo(prec), hi(prec);
        bound_family_value(lo.v, k, ell, prec, MPFR_RNDD);
        bound_family_value(hi.v, k, ell, prec, MPFR_RNDU);
        auto lo_ceil = ceil_to_u128(lo.v);
        auto hi_ceil = ceil_to_u128(hi.v);
        answer = hi_ceil;
        if (lo_ceil == hi_ceil)
            break;
    }
    if (!answer)
        throw InvalidParams("family size for k=" + std::to_string(k) + " exceeds 128 bits");
    return *answer;
}

constexpr std::uint64_t fin(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t v, unsigned r) { return (v << r) | (v >> (64 - r)); }

constexpr std::uint64_t index_word(HashIndex index)
{
    auto hi = high64(index.value);
    return hi == 0 ? fin(low64(index.value)) : fin(low64(index.value) ^ fin(hi));
}

void check_set(std::span<const u128> set, IdRange ell)
{
    if (set.empty())
        throw InvalidParams("perfect hash search needs a non-empty set");
    if (!ell.holds_at_least(set.size()))
        throw InvalidParams("set larger than the hash domain");
    std::vector<u128> sorted(set.begin(), set.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidParams("set contains duplicates");
    if (!ell.contains(sorted.back()))
        throw InvalidParams("set member outside the hash domain");
}

} // namespace

u128 family_size(std::uint64_t k, IdRange ell)
{
    if (k == 0)
        throw InvalidParams("family_size needs k >= 1");
    if (!ell.holds_at_least(k))
        throw InvalidParams("family_size needs k <= ell");
    thread_local std::map<std::pair<std::uint64_t, u128>, u128> cache;
    auto key = std::make_pair(k, ell.last());
    if (auto it = cache.find(key); it != cache.end())
        return it->second;
    u128 size = compute_family_size(k, ell);
    cache.emplace(key, size);
    return size;
}

unsigned index_bits(std::uint64_t k, IdRange ell) { return bit_width(family_size(k, ell) - 1); }

std::uint64_t eval_hash(HashIndex index, u128 x, std::uint64_t buckets)
{
    std::uint64_t a = fin(low64(x) ^ 0x9E3779B97F4A7C15ull);
    std::uint64_t b = fin(high64(x) ^ 0xC2B2AE3D27D4EB4Full);
    std::uint64_t d = fin(a ^ rotl(b, 32) ^ index_word(index));
    return d % buckets;
}

bool is_perfect(HashIndex index, std::span<const u128> set, std::uint64_t buckets)
{
    if (set.size() > buckets)
        return false;
    std::vector<std::uint64_t> seen;
    seen.reserve(set.size());
    for (u128 x : set) {
        auto b = eval_hash(index, x, buckets);
        if (std::find(seen.begin(), seen.end(), b) != seen.end())
            return false;
        seen.push_back(b);
    }
    return true;
}

HashSearch search_perfect_hash(std::span<const u128> set, IdRange ell, std::uint64_t buckets)
{
    check_set(set, ell);
    if (buckets == 0)
        buckets = set.size();
    if (buckets < set.size())
        throw InvalidParams("fewer buckets than keys");
    u128 size = family_size(set.size(), ell);

    // stamp[b] == probe + 1 marks bucket b as taken by the current candidate.
    std::vector<std::uint64_t> stamp(buckets, 0);
    std::uint64_t probes = 0;
    for (u128 i = 0; i < size; ++i) {
        ++probes;
        HashIndex candidate{i};
        bool injective = true;
        for (u128 x : set) {
            auto b = eval_hash(candidate, x, buckets);
            if (stamp[b] == probes) {
                injective = false;
                break;
            }
            stamp[b] = probes;
        }
        if (injective)
            return {candidate, probes};
    }
    throw NoPerfectHash("no member of the family of size " + to_string(size) + " is injective on the set");
}

HashIndex find_perfect_hash(std::span<const u128> set, std::uint64_t k, IdRange ell)
{
    if (k != set.size())
        throw InvalidParams("k must equal |S|");
    return search_perfect_hash(set, ell, k).index;
}

} // namespace gcert
