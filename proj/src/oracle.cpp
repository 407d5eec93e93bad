#include "gcert/oracle.hpp"
#include "gcert/errors.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace gcert {

namespace {

using Words = std::vector<std::uint64_t>;

// Chronological backtracking with forward checking. Forward checking only
// prunes dead branches, so the first solution is still the lexicographic one.
class HomomorphismSearch {
public:
    HomomorphismSearch(const Graph &g, const TargetGraph &h)
        : g_(g), h_(h), words_((h.vertex_count() + 63) / 64), assignment_(g.vertex_count(), 0)
    {
        auto np = h.vertex_count();
        target_rows_.assign(np, Words(words_, 0));
        for (std::uint32_t a = 0; a < np; ++a)
            for (std::uint32_t b = 0; b < np; ++b)
                if (h.has_edge(a, b))
                    target_rows_[a][b / 64] |= std::uint64_t{1} << (b % 64);
        Words full(words_, 0);
        for (std::uint32_t b = 0; b < np; ++b)
            full[b / 64] |= std::uint64_t{1} << (b % 64);
        domains_.assign(g.vertex_count(), full);
    }

    std::optional<std::vector<std::uint32_t>> run()
    {
        if (g_.vertex_count() == 0 || extend(0))
            return assignment_;
        return std::nullopt;
    }

private:
    bool extend(Vertex v)
    {
        if (v == g_.vertex_count())
            return true;
        const Words dom = domains_[v];
        for (std::uint32_t c = 0; c < h_.vertex_count(); ++c) {
            if (!((dom[c / 64] >> (c % 64)) & 1))
                continue;
            if (++attempts_ > homomorphism_search_budget)
                throw TooLarge("homomorphism search exceeded its budget");
            assignment_[v] = c;
            std::vector<std::pair<Vertex, Words>> saved;
            bool alive = true;
            for (Vertex u : g_.neighbors(v)) {
                if (u <= v)
                    continue;
                saved.emplace_back(u, domains_[u]);
                bool empty = true;
                for (std::size_t i = 0; i < words_; ++i) {
                    domains_[u][i] &= target_rows_[c][i];
                    empty = empty && domains_[u][i] == 0;
                }
                if (empty) {
                    alive = false;
                    break;
                }
            }
            if (alive && extend(v + 1))
                return true;
            for (auto &[u, d] : saved)
                domains_[u] = std::move(d);
        }
        return false;
    }

    const Graph &g_;
    const TargetGraph &h_;
    std::size_t words_;
    std::vector<Words> target_rows_;
    std::vector<Words> domains_;
    std::vector<std::uint32_t> assignment_;
    std::uint64_t attempts_ = 0;
};

// Saturating helpers for counting certificate spaces.
constexpr u128 saturate = u128{1} << 100;

u128 sat_mul(u128 a, u128 b)
{
    if (a == 0 || b == 0)
        return 0;
    if (a > saturate / b)
        return saturate;
    return a * b;
}

u128 sat_pow(u128 base, std::uint64_t e)
{
    u128 r = 1;
    for (std::uint64_t i = 0; i < e && r < saturate; ++i)
        r = sat_mul(r, base);
    return r;
}

u128 sat_binomial(u128 m, std::uint64_t k)
{
    if (k > m)
        return 0;
    u128 r = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        // r * (m - i) / (i + 1) stays integral at every step.
        if (r > saturate / (m - i < saturate ? m - i : saturate))
            return saturate;
        r = r * (m - i) / (i + 1);
    }
    return r;
}

std::vector<IdRange> bitmap_ranges(const SchemeParams &params, std::uint64_t max_n)
{
    std::vector<IdRange> out;
    for (std::uint64_t n = 1; n <= max_n; ++n) {
        auto m = params.id_policy.evaluate(n);
        if (!m || !m->count() || *m->count() > bitmap_cap)
            continue;
        if (std::find(out.begin(), out.end(), *m) == out.end())
            out.push_back(*m);
    }
    return out;
}

// Odometer over values in [0, radix)^len; false once it wraps.
bool advance(std::vector<std::uint32_t> &digits, std::uint32_t radix)
{
    for (auto i = digits.size(); i-- > 0;) {
        if (++digits[i] < radix)
            return true;
        digits[i] = 0;
    }
    return false;
}

} // namespace

std::optional<std::vector<std::uint32_t>> find_homomorphism(const Graph &graph, const TargetGraph &target)
{
    return HomomorphismSearch(graph, target).run();
}

bool exists_homomorphism(const Graph &graph, const TargetGraph &target)
{
    return find_homomorphism(graph, target).has_value();
}

bool is_homomorphism(const Graph &graph, const TargetGraph &target, std::span<const std::uint32_t> map)
{
    if (map.size() != graph.vertex_count())
        return false;
    return std::all_of(graph.edges().begin(), graph.edges().end(),
                       [&](const Edge &e) { return target.has_edge(map[e.first], map[e.second]); });
}

bool is_bipartite(const Graph &graph)
{
    std::vector<int> side(graph.vertex_count(), -1);
    for (Vertex s = 0; s < graph.vertex_count(); ++s) {
        if (side[s] != -1)
            continue;
        side[s] = 0;
        std::queue<Vertex> q;
        q.push(s);
        while (!q.empty()) {
            auto u = q.front();
            q.pop();
            for (Vertex v : graph.neighbors(u)) {
                if (side[v] == -1) {
                    side[v] = 1 - side[u];
                    q.push(v);
                }
                else if (side[v] == side[u])
                    return false;
            }
        }
    }
    return true;
}

void enumerate_hash_payloads(const HashLayout &layout, std::uint64_t max_n,
                             const std::function<void(const HashPayload &)> &visit)
{
    for (std::uint64_t n = 1; n <= max_n; ++n) {
        auto m = layout.id_policy.evaluate(n);
        if (!m)
            continue;
        u128 family = family_size(n, *m);
        HashPayload p{n, {}, std::vector<std::uint32_t>(layout.buckets(n), 0)};
        for (u128 i = 0; i < family; ++i) {
            p.hash_index.value = i;
            std::fill(p.values.begin(), p.values.end(), 0);
            do
                visit(p);
            while (advance(p.values, layout.value_count));
        }
    }
}

std::optional<std::uint64_t> audit_space_size(Scheme scheme, const SchemeParams &params, const AuditBounds &bounds)
{
    u128 total = 0;
    auto np = params.target.vertex_count();
    switch (scheme) {
    case Scheme::hash: {
        auto layout = hash_layout(params);
        for (std::uint64_t n = 1; n <= bounds.max_n && total < saturate; ++n) {
            auto m = params.id_policy.evaluate(n);
            if (!m)
                continue;
            if (n >= 90)
                return std::nullopt;
            total += sat_mul(family_size(n, *m), sat_pow(np, layout.buckets(n)));
        }
        break;
    }
    case Scheme::idlist:
        for (std::uint64_t n = 1; n <= bounds.max_n && total < saturate; ++n) {
            auto m = params.id_policy.evaluate(n);
            if (!m)
                continue;
            auto count = m->count() ? *m->count() : saturate;
            total += sat_mul(sat_binomial(count, n), sat_pow(np, n));
        }
        break;
    case Scheme::bitmap: {
        auto ranges = bitmap_ranges(params, bounds.max_n);
        for (std::uint64_t n = 1; n <= bounds.max_n; ++n) {
            // Bitmaps over ranges beyond the cap are never materialised, so
            // such a space cannot be audited exhaustively.
            auto m = params.id_policy.evaluate(n);
            if (m && (!m->count() || *m->count() > bitmap_cap) && params.target.color_bits() != 0)
                return std::nullopt;
        }
        if (params.target.color_bits() == 0)
            return ranges.empty() ? 0 : 1;
        for (auto m : ranges)
            total += sat_pow(np, static_cast<std::uint64_t>(*m.count()));
        break;
    }
    }
    if (total >= saturate || total > ~std::uint64_t{0})
        return std::nullopt;
    return static_cast<std::uint64_t>(total);
}

AuditReport audit_soundness(const Graph &graph, const IdAssignment &ids, Scheme scheme, const SchemeParams &params,
                            const AuditBounds &bounds)
{
    auto space = audit_space_size(scheme, params, bounds);
    if (!space || *space > bounds.max_certificates)
        throw TooLarge("certificate space exceeds the audit bound");

    AuditReport report;
    report.property_holds = exists_homomorphism(graph, params.target);

    Certificate current{scheme, {}};
    std::vector<LocalView> views;
    for (Vertex v = 0; v < graph.vertex_count(); ++v)
        views.push_back(local_view(graph, ids, v, current));

    // Runs every node on `current`; returns whether all accepted.
    auto run = [&]() {
        ++report.certificates_tried;
        for (const auto &view : views) {
            if (verify(view, params) == Decision::reject) {
                if (report.certificates_tried == 1)
                    report.rejecting_node_id = view.own_id;
                return false;
            }
        }
        ++report.certificates_accepted;
        if (!report.witness_certificate)
            report.witness_certificate = current;
        return true;
    };

    switch (scheme) {
    case Scheme::hash: {
        auto layout = hash_layout(params);
        std::vector<std::uint32_t> induced(graph.vertex_count());
        enumerate_hash_payloads(layout, bounds.max_n, [&](const HashPayload &p) {
            current.payload = encode_hash_payload(p, layout);
            if (!run())
                return;
            for (Vertex v = 0; v < graph.vertex_count(); ++v)
                induced[v] = p.values[eval_hash(p.hash_index, ids[v], p.values.size())];
            if (!is_homomorphism(graph, params.target, induced))
                ++report.non_homomorphic_accepts;
        });
        break;
    }
    case Scheme::idlist: {
        auto np = params.target.vertex_count();
        for (std::uint64_t n = 1; n <= bounds.max_n; ++n) {
            auto m = params.id_policy.evaluate(n);
            if (!m)
                continue;
            auto count = static_cast<std::uint64_t>(*m->count()); // bounded by the space check
            std::vector<std::uint64_t> combo(n);
            for (std::uint64_t i = 0; i < n; ++i)
                combo[i] = i;
            IdListPayload p{n, std::vector<IdListRecord>(n)};
            for (;;) {
                std::vector<std::uint32_t> colors(n, 0);
                do {
                    for (std::uint64_t i = 0; i < n; ++i)
                        p.records[i] = {combo[i], colors[i]};
                    current.payload = encode_idlist_payload(p, params);
                    run();
                } while (advance(colors, np));
                // Next n-combination of [0, count) in lexicographic order.
                auto i = n;
                while (i > 0 && combo[i - 1] == count - n + (i - 1))
                    --i;
                if (i == 0)
                    break;
                ++combo[i - 1];
                for (auto j = i; j < n; ++j)
                    combo[j] = combo[j - 1] + 1;
            }
        }
        break;
    }
    case Scheme::bitmap:
        for (auto m : bitmap_ranges(params, bounds.max_n)) {
            BitmapPayload p;
            if (params.target.color_bits() != 0)
                p.colors.assign(static_cast<std::size_t>(*m.count()), 0);
            do {
                current.payload = encode_bitmap_payload(p, params);
                run();
            } while (!p.colors.empty() && advance(p.colors, params.target.vertex_count()));
            if (p.colors.empty())
                break; // one-vertex target: the single empty bitmap serves every M
        }
        break;
    }
    report.certificate_accepted_exists = report.certificates_accepted > 0;
    if (report.certificate_accepted_exists)
        report.rejecting_node_id.reset();
    return report;
}

std::string format_report(const AuditReport &report)
{
    std::string witness = "none";
    if (report.witness_certificate)
        witness = to_hex(serialize_certificate(*report.witness_certificate));
    else if (report.rejecting_node_id)
        witness = to_string(*report.rejecting_node_id);
    return std::string("property=") + (report.property_holds ? "true" : "false") +
           " accepted=" + (report.certificate_accepted_exists ? "true" : "false") +
           " tried=" + std::to_string(report.certificates_tried) + " witness=" + witness;
}

} // namespace gcert
