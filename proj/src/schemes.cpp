#include "gcert/schemes.hpp"
#include "gcert/errors.hpp"
#include "gcert/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace gcert {

std::uint64_t HashLayout::buckets(std::uint64_t n) const
{
    if (lambda == 1.0)
        return n;
    return static_cast<std::uint64_t>(std::ceil(lambda * static_cast<double>(n)));
}

HashLayout hash_layout(const SchemeParams &params)
{
    return {params.target.vertex_count(), params.id_policy, params.lambda};
}

namespace {

// Largest claimed n whose family size still fits 128 bits is below this.
constexpr std::uint64_t max_claimed_n = 90;

void check_lambda(double lambda)
{
    if (!(lambda >= 1.0 && lambda <= 64.0))
        throw InvalidParams("range multiplier must lie in [1, 64]");
}

struct HashShape {
    IdRange m;
    u128 family;
    unsigned index_width;
    std::uint64_t buckets;
};

// Everything the claimed n determines; throws MalformedCertificate if the
// claimed n does not describe a valid family.
HashShape hash_shape(std::uint64_t claimed_n, const HashLayout &layout)
{
    if (claimed_n >= max_claimed_n)
        throw MalformedCertificate("claimed n too large for a 128-bit hash index");
    auto m = layout.id_policy.evaluate(claimed_n);
    if (!m)
        throw MalformedCertificate("claimed n has no identifier range");
    HashShape shape{*m, family_size(claimed_n, *m), 0, layout.buckets(claimed_n)};
    shape.index_width = bit_width(shape.family - 1);
    return shape;
}

u128 bitmap_range(const SchemeParams &params, std::uint64_t n)
{
    auto m = params.id_policy.at(n);
    if (!m.count() || *m.count() > bitmap_cap)
        throw BitmapTooLarge("M=" + m.to_string() + " exceeds the bitmap cap of 2^26");
    return *m.count();
}

// Shared prover preamble: identifiers must fit M(n) and a homomorphism must exist.
std::vector<std::uint32_t> honest_coloring(const Graph &graph, const IdAssignment &ids, const SchemeParams &params)
{
    auto n = graph.vertex_count();
    if (ids.size() != n)
        throw InvalidId("identifier assignment does not cover the graph");
    auto m = params.id_policy.at(n);
    for (u128 id : ids.ids())
        if (!m.contains(id))
            throw InvalidId("identifier " + to_string(id) + " is not below M(n)=" + m.to_string());
    auto phi = find_homomorphism(graph, params.target);
    if (!phi)
        throw NotSatisfiable("graph has no homomorphism to the target");
    return *phi;
}

template <class Check>
Decision decide(Check &&check)
{
    try {
        return check() ? Decision::accept : Decision::reject;
    }
    catch (const Error &) {
        return Decision::reject;
    }
    catch (const std::bad_alloc &) {
        return Decision::reject;
    }
}

} // namespace

BitString encode_hash_payload(const HashPayload &payload, const HashLayout &layout)
{
    check_lambda(layout.lambda);
    HashShape shape;
    try {
        shape = hash_shape(payload.claimed_n, layout);
    }
    catch (const MalformedCertificate &e) {
        throw InvalidParams(e.what());
    }
    if (payload.hash_index.value >= shape.family)
        throw InvalidParams("hash index outside the family");
    if (payload.values.size() != shape.buckets)
        throw InvalidParams("L must have one entry per bucket");
    BitString out;
    write_gamma(out, payload.claimed_n);
    out.append(payload.hash_index.value, shape.index_width);
    auto w = layout.value_bits();
    for (auto v : payload.values) {
        if (v >= layout.value_count)
            throw InvalidParams("L entry outside the value range");
        out.append(v, w);
    }
    return out;
}

HashPayload decode_hash_payload(const BitString &bits, const HashLayout &layout)
{
    BitReader in(bits);
    HashPayload out;
    out.claimed_n = in.read_gamma();
    auto shape = hash_shape(out.claimed_n, layout);
    out.hash_index.value = in.read(shape.index_width);
    if (out.hash_index.value >= shape.family)
        throw MalformedCertificate("hash index outside the family");
    auto w = layout.value_bits();
    if (w != 0 && in.remaining() / w < shape.buckets)
        throw MalformedCertificate("payload truncated");
    out.values.reserve(shape.buckets);
    for (std::uint64_t i = 0; i < shape.buckets; ++i) {
        auto v = static_cast<std::uint32_t>(in.read(w));
        if (v >= layout.value_count)
            throw MalformedCertificate("L entry outside the value range");
        out.values.push_back(v);
    }
    if (!in.at_end())
        throw MalformedCertificate("trailing bits after L");
    return out;
}

std::optional<std::size_t> hash_layout_length(const BitString &bits, const HashLayout &layout)
{
    try {
        BitReader in(bits);
        auto n = in.read_gamma();
        auto shape = hash_shape(n, layout);
        return in.position() + shape.index_width + shape.buckets * layout.value_bits();
    }
    catch (const Error &) {
        return std::nullopt;
    }
}

BitString encode_idlist_payload(const IdListPayload &payload, const SchemeParams &params)
{
    auto m = params.id_policy.evaluate(payload.claimed_n);
    if (!m)
        throw InvalidParams("claimed n has no identifier range");
    if (payload.records.size() != payload.claimed_n)
        throw InvalidParams("id-list needs exactly n records");
    auto w = params.target.color_bits();
    BitString out;
    write_gamma(out, payload.claimed_n);
    for (std::size_t i = 0; i < payload.records.size(); ++i) {
        const auto &r = payload.records[i];
        if (!m->contains(r.id) || r.color >= params.target.vertex_count())
            throw InvalidParams("id-list record out of range");
        if (i > 0 && payload.records[i - 1].id >= r.id)
            throw InvalidParams("id-list records must be strictly ascending");
        out.append(r.id, m->id_bits());
        out.append(r.color, w);
    }
    return out;
}

IdListPayload decode_idlist_payload(const BitString &bits, const SchemeParams &params)
{
    BitReader in(bits);
    IdListPayload out;
    out.claimed_n = in.read_gamma();
    auto m = params.id_policy.evaluate(out.claimed_n);
    if (!m)
        throw MalformedCertificate("claimed n has no identifier range");
    auto w = params.target.color_bits();
    std::uint64_t record_bits = m->id_bits() + w;
    // With zero-width records M = 1 forces claimed n = 1.
    if (record_bits != 0 && in.remaining() / record_bits != out.claimed_n)
        throw MalformedCertificate("payload length does not match n records");
    if (record_bits != 0 && in.remaining() % record_bits != 0)
        throw MalformedCertificate("trailing bits after records");
    out.records.reserve(out.claimed_n);
    for (std::uint64_t i = 0; i < out.claimed_n; ++i) {
        IdListRecord r;
        r.id = in.read(m->id_bits());
        r.color = static_cast<std::uint32_t>(in.read(w));
        if (!m->contains(r.id))
            throw MalformedCertificate("record identifier not below M");
        if (r.color >= params.target.vertex_count())
            throw MalformedCertificate("record colour outside the target");
        if (!out.records.empty() && out.records.back().id >= r.id)
            throw MalformedCertificate("records not strictly ascending");
        out.records.push_back(r);
    }
    if (!in.at_end())
        throw MalformedCertificate("trailing bits after records");
    return out;
}

BitString encode_bitmap_payload(const BitmapPayload &payload, const SchemeParams &params)
{
    auto w = params.target.color_bits();
    BitString out;
    if (w == 0) {
        if (!payload.colors.empty())
            throw InvalidParams("a one-vertex target has an empty bitmap");
        return out;
    }
    if (payload.colors.empty() || payload.colors.size() > bitmap_cap ||
        !params.id_policy.in_image(IdRange::of(payload.colors.size())))
        throw InvalidParams("bitmap length is not M(n) for any n");
    for (auto c : payload.colors) {
        if (c >= params.target.vertex_count())
            throw InvalidParams("bitmap colour outside the target");
        out.append(c, w);
    }
    return out;
}

BitmapPayload decode_bitmap_payload(const BitString &bits, const SchemeParams &params)
{
    auto w = params.target.color_bits();
    BitmapPayload out;
    if (w == 0) {
        if (!bits.empty())
            throw MalformedCertificate("a one-vertex target has an empty bitmap");
        return out;
    }
    if (bits.empty() || bits.size() % w != 0)
        throw MalformedCertificate("bitmap length is not a multiple of the colour width");
    auto m = bits.size() / w;
    if (m > bitmap_cap || !params.id_policy.in_image(IdRange::of(m)))
        throw MalformedCertificate("bitmap length is not M(n) for any n");
    BitReader in(bits);
    out.colors.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        auto c = static_cast<std::uint32_t>(in.read(w));
        if (c >= params.target.vertex_count())
            throw MalformedCertificate("bitmap colour outside the target");
        out.colors.push_back(c);
    }
    return out;
}

Certificate prove_hash(const Graph &graph, const IdAssignment &ids, const SchemeParams &params, ProverStats *stats)
{
    check_lambda(params.lambda);
    auto phi = honest_coloring(graph, ids, params);
    auto layout = hash_layout(params);
    auto n = graph.vertex_count();
    auto search = search_perfect_hash(ids.ids(), params.id_policy.at(n), layout.buckets(n));
    if (stats)
        stats->probes = search.probes;

    HashPayload payload{n, search.index, std::vector<std::uint32_t>(layout.buckets(n), 0)};
    for (Vertex v = 0; v < n; ++v)
        payload.values[eval_hash(search.index, ids[v], layout.buckets(n))] = phi[v];
    return {Scheme::hash, encode_hash_payload(payload, layout)};
}

Certificate prove_idlist(const Graph &graph, const IdAssignment &ids, const SchemeParams &params)
{
    auto phi = honest_coloring(graph, ids, params);
    IdListPayload payload{graph.vertex_count(), {}};
    for (Vertex v = 0; v < graph.vertex_count(); ++v)
        payload.records.push_back({ids[v], phi[v]});
    std::sort(payload.records.begin(), payload.records.end(),
              [](const IdListRecord &a, const IdListRecord &b) { return a.id < b.id; });
    return {Scheme::idlist, encode_idlist_payload(payload, params)};
}

Certificate prove_bitmap(const Graph &graph, const IdAssignment &ids, const SchemeParams &params)
{
    auto m = bitmap_range(params, graph.vertex_count());
    auto phi = honest_coloring(graph, ids, params);
    BitmapPayload payload;
    if (params.target.color_bits() != 0) {
        payload.colors.assign(static_cast<std::size_t>(m), 0);
        for (Vertex v = 0; v < graph.vertex_count(); ++v)
            payload.colors[static_cast<std::size_t>(ids[v])] = phi[v];
    }
    return {Scheme::bitmap, encode_bitmap_payload(payload, params)};
}

Certificate prove(Scheme scheme, const Graph &graph, const IdAssignment &ids, const SchemeParams &params,
                  ProverStats *stats)
{
    if (stats)
        stats->probes = 0;
    switch (scheme) {
    case Scheme::hash:
        return prove_hash(graph, ids, params, stats);
    case Scheme::idlist:
        return prove_idlist(graph, ids, params);
    case Scheme::bitmap:
        return prove_bitmap(graph, ids, params);
    }
    throw InvalidParams("unknown scheme");
}

Decision verify_hash(const LocalView &view, const SchemeParams &params)
{
    return decide([&] {
        const auto &cert = view.certificate.get();
        if (cert.scheme != Scheme::hash)
            return false;
        auto layout = hash_layout(params);
        auto cert_fields = decode_hash_payload(cert.payload, layout);
        auto buckets = cert_fields.values.size();
        auto color_of = [&](u128 id) { return cert_fields.values[eval_hash(cert_fields.hash_index, id, buckets)]; };
        auto own = color_of(view.own_id);
        return std::all_of(view.neighbor_ids.begin(), view.neighbor_ids.end(),
                           [&](u128 w) { return params.target.has_edge(own, color_of(w)); });
    });
}

Decision verify_idlist(const LocalView &view, const SchemeParams &params)
{
    return decide([&] {
        const auto &cert = view.certificate.get();
        if (cert.scheme != Scheme::idlist)
            return false;
        auto list = decode_idlist_payload(cert.payload, params);
        auto color_of = [&](u128 id) -> std::optional<std::uint32_t> {
            auto it = std::lower_bound(list.records.begin(), list.records.end(), id,
                                       [](const IdListRecord &r, u128 x) { return r.id < x; });
            if (it == list.records.end() || it->id != id)
                return std::nullopt;
            return it->color;
        };
        auto own = color_of(view.own_id);
        if (!own)
            return false;
        return std::all_of(view.neighbor_ids.begin(), view.neighbor_ids.end(), [&](u128 w) {
            auto c = color_of(w);
            return c && params.target.has_edge(*own, *c);
        });
    });
}

Decision verify_bitmap(const LocalView &view, const SchemeParams &params)
{
    return decide([&] {
        const auto &cert = view.certificate.get();
        if (cert.scheme != Scheme::bitmap)
            return false;
        auto bitmap = decode_bitmap_payload(cert.payload, params);
        if (params.target.color_bits() == 0) // every vertex maps to the single loopless H-vertex
            return view.neighbor_ids.empty();
        auto m = bitmap.colors.size();
        if (view.own_id >= m)
            return false;
        auto own = bitmap.colors[static_cast<std::size_t>(view.own_id)];
        return std::all_of(view.neighbor_ids.begin(), view.neighbor_ids.end(), [&](u128 w) {
            return w < m && params.target.has_edge(own, bitmap.colors[static_cast<std::size_t>(w)]);
        });
    });
}

Decision verify(const LocalView &view, const SchemeParams &params)
{
    switch (view.certificate.get().scheme) {
    case Scheme::hash:
        return verify_hash(view, params);
    case Scheme::idlist:
        return verify_idlist(view, params);
    case Scheme::bitmap:
        return verify_bitmap(view, params);
    }
    return Decision::reject;
}

namespace {

bool trailing_zero(const BitString &bits, std::size_t from)
{
    for (auto i = from; i < bits.size(); ++i)
        if (bits[i])
            return false;
    return true;
}

std::optional<std::size_t> idlist_length(const BitString &bits, const SchemeParams &params)
{
    try {
        BitReader in(bits);
        auto n = in.read_gamma();
        auto m = params.id_policy.evaluate(n);
        if (!m)
            return std::nullopt;
        return in.position() + n * (m->id_bits() + params.target.color_bits());
    }
    catch (const Error &) {
        return std::nullopt;
    }
}

// Largest policy-image M whose bitmap fits the padded length; an honest
// bitmap read with a larger M only gains zero entries no node looks at.
std::optional<std::size_t> bitmap_length(const BitString &bits, const SchemeParams &params)
{
    auto w = params.target.color_bits();
    if (w == 0)
        return 0;
    for (auto len = bits.size() - bits.size() % w; len > 0 && bits.size() - len < 8; len -= w) {
        auto m = len / w;
        if (m <= bitmap_cap && params.id_policy.in_image(IdRange::of(m)))
            return len;
    }
    return std::nullopt;
}

} // namespace

Certificate strip_padding(Certificate cert, const SchemeParams &params)
{
    std::optional<std::size_t> exact;
    switch (cert.scheme) {
    case Scheme::hash:
        exact = hash_layout_length(cert.payload, hash_layout(params));
        break;
    case Scheme::idlist:
        exact = idlist_length(cert.payload, params);
        break;
    case Scheme::bitmap:
        exact = bitmap_length(cert.payload, params);
        break;
    }
    if (exact && *exact <= cert.payload.size() && cert.payload.size() - *exact < 8 &&
        trailing_zero(cert.payload, *exact))
        cert.payload.truncate(*exact);
    return cert;
}

} // namespace gcert
