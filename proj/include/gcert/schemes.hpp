#pragma once

#include "gcert/certificate.hpp"
#include "gcert/graph_model.hpp"
#include "gcert/hashing.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gcert {

enum class Decision { accept, reject };

/// The fixed framework a scheme is designed for: target H, M(n), and the
/// range multiplier of the hash-compressed scheme. Prover and verifiers
/// must agree on all three; none of them travel in the certificate.
struct SchemeParams {
    TargetGraph target;
    IdRangePolicy id_policy = IdRangePolicy::polynomial(4);
    double lambda = 1.0;
};

/// Largest M for which the bitmap scheme will materialise a certificate.
inline constexpr std::uint64_t bitmap_cap = std::uint64_t{1} << 26;

/// Shape of a (claimed_n, index, L) payload. Shared by graph and CSP certificates.
struct HashLayout {
    std::uint32_t value_count = 1; // n' for graphs, |D| for CSPs
    IdRangePolicy id_policy = IdRangePolicy::polynomial(4);
    double lambda = 1.0;

    /// ceil(lambda * n): number of entries of L.
    std::uint64_t buckets(std::uint64_t n) const;
    unsigned value_bits() const { return bit_width(value_count - 1); }
};

HashLayout hash_layout(const SchemeParams &params);

struct HashPayload {
    std::uint64_t claimed_n = 0;
    HashIndex hash_index;
    std::vector<std::uint32_t> values; // L

    bool operator==(const HashPayload &) const = default;
};

struct IdListRecord {
    u128 id = 0;
    std::uint32_t color = 0;

    bool operator==(const IdListRecord &) const = default;
};

struct IdListPayload {
    std::uint64_t claimed_n = 0;
    std::vector<IdListRecord> records; // strictly ascending by id

    bool operator==(const IdListPayload &) const = default;
};

/// colors[i] is the colour of identifier i; the list length is M. Empty when n' = 1.
struct BitmapPayload {
    std::vector<std::uint32_t> colors;

    bool operator==(const BitmapPayload &) const = default;
};

// Codecs. Encoders throw InvalidParams on out-of-range fields; decoders are
// total and throw MalformedCertificate on anything but an exact, canonical payload.
BitString encode_hash_payload(const HashPayload &payload, const HashLayout &layout);
HashPayload decode_hash_payload(const BitString &bits, const HashLayout &layout);
BitString encode_idlist_payload(const IdListPayload &payload, const SchemeParams &params);
IdListPayload decode_idlist_payload(const BitString &bits, const SchemeParams &params);
BitString encode_bitmap_payload(const BitmapPayload &payload, const SchemeParams &params);
BitmapPayload decode_bitmap_payload(const BitString &bits, const SchemeParams &params);

struct ProverStats {
    std::uint64_t probes = 0;
};

// Honest provers. All throw NotSatisfiable when G has no homomorphism to H and
// InvalidId when the identifiers do not fit M(n).
Certificate prove_hash(const Graph &graph, const IdAssignment &ids, const SchemeParams &params,
                       ProverStats *stats = nullptr);
Certificate prove_idlist(const Graph &graph, const IdAssignment &ids, const SchemeParams &params);
/// Also throws BitmapTooLarge when M(n) > bitmap_cap.
Certificate prove_bitmap(const Graph &graph, const IdAssignment &ids, const SchemeParams &params);
Certificate prove(Scheme scheme, const Graph &graph, const IdAssignment &ids, const SchemeParams &params,
                  ProverStats *stats = nullptr);

// Node verifiers: pure functions of the local view, never throw.
Decision verify_hash(const LocalView &view, const SchemeParams &params);
Decision verify_idlist(const LocalView &view, const SchemeParams &params);
Decision verify_bitmap(const LocalView &view, const SchemeParams &params);
/// Dispatches on the certificate's tag.
Decision verify(const LocalView &view, const SchemeParams &params);

/// Exact payload length of a HASH-layout bit string, if its prefix parses.
std::optional<std::size_t> hash_layout_length(const BitString &bits, const HashLayout &layout);

/// Removes file padding (< 8 trailing zero bits) so the payload is exact.
/// Certificates whose structure cannot be recovered are returned unchanged.
Certificate strip_padding(Certificate cert, const SchemeParams &params);

} // namespace gcert
