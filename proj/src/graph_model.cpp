#include "gcert/graph_model.hpp"
#include "gcert/errors.hpp"
#include "gcert/random.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace gcert {

Graph::Graph(std::uint32_t vertex_count, std::vector<Edge> edges) : n_(vertex_count), adjacency_(vertex_count)
{
    for (auto &[u, v] : edges) {
        if (u >= n_ || v >= n_)
            throw InvalidEdge("edge endpoint out of range: " + std::to_string(u) + " " + std::to_string(v));
        if (u == v)
            throw InvalidEdge("self-loop at vertex " + std::to_string(u));
        if (u > v)
            std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
        throw InvalidEdge("duplicate edge " + std::to_string(dup->first) + " " + std::to_string(dup->second));
    edges_ = std::move(edges);
    for (auto [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto &adj : adjacency_)
        std::sort(adj.begin(), adj.end());
}

bool Graph::has_edge(Vertex u, Vertex v) const
{
    if (u >= n_ || v >= n_)
        return false;
    return std::binary_search(adjacency_[u].begin(), adjacency_[u].end(), v);
}

TargetGraph::TargetGraph(Graph graph) : graph_(std::move(graph))
{
    auto n = graph_.vertex_count();
    if (n == 0)
        throw InvalidParams("target graph needs at least one vertex");
    matrix_.assign(std::size_t{n} * n, 0);
    for (auto [a, b] : graph_.edges()) {
        matrix_[std::size_t{a} * n + b] = 1;
        matrix_[std::size_t{b} * n + a] = 1;
    }
}

TargetGraph TargetGraph::complete(std::uint32_t k)
{
    std::vector<Edge> edges;
    for (Vertex a = 0; a < k; ++a)
        for (Vertex b = a + 1; b < k; ++b)
            edges.emplace_back(a, b);
    return TargetGraph(Graph(k, std::move(edges)));
}

TargetGraph TargetGraph::cycle(std::uint32_t k)
{
    if (k < 3)
        throw InvalidParams("a cycle needs at least 3 vertices");
    std::vector<Edge> edges;
    for (Vertex a = 0; a < k; ++a)
        edges.emplace_back(a, (a + 1) % k);
    return TargetGraph(Graph(k, std::move(edges)));
}

std::optional<TargetGraph> TargetGraph::builtin(std::string_view name)
{
    if (name.size() < 2 || (name[0] != 'K' && name[0] != 'C'))
        return std::nullopt;
    std::uint32_t k = 0;
    auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
    if (ec != std::errc{} || ptr != name.data() + name.size() || k == 0 || k > 4096)
        return std::nullopt;
    if (name[0] == 'K')
        return complete(k);
    if (k < 3)
        return std::nullopt;
    return cycle(k);
}

IdAssignment::IdAssignment(std::vector<u128> ids, IdRange range) : ids_(std::move(ids)), range_(range)
{
    if (!range_.holds_at_least(ids_.size()))
        throw InvalidId("identifier range M=" + range_.to_string() + " is smaller than n=" +
                        std::to_string(ids_.size()));
    std::vector<u128> sorted = ids_;
    std::sort(sorted.begin(), sorted.end());
    if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end())
        throw InvalidId("duplicate identifier " + to_string(*dup));
    if (!sorted.empty() && !range_.contains(sorted.back()))
        throw InvalidId("identifier " + to_string(sorted.back()) + " is not below M=" + range_.to_string());
}

IdRangePolicy IdRangePolicy::polynomial(unsigned c)
{
    if (c == 0)
        throw InvalidParams("poly:c needs c >= 1");
    return IdRangePolicy(Kind::polynomial, {}, c);
}

std::optional<IdRangePolicy> IdRangePolicy::parse(std::string_view text)
{
    if (text == "doubexp")
        return doubly_exponential();
    if (text.starts_with("fixed:")) {
        auto m = IdRange::parse(text.substr(6));
        if (!m)
            return std::nullopt;
        return fixed(*m);
    }
    if (text.starts_with("poly:")) {
        auto c = parse_u128(text.substr(5));
        if (!c || *c == 0 || *c > 128)
            return std::nullopt;
        return polynomial(static_cast<unsigned>(*c));
    }
    return std::nullopt;
}

namespace {

IdRange saturating_power(std::uint64_t base, unsigned exponent)
{
    u128 v = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        if (base != 0 && v > u128_max / base)
            return IdRange::full();
        v *= base;
    }
    return IdRange::of(v);
}

} // namespace

std::optional<IdRange> IdRangePolicy::evaluate(std::uint64_t n) const
{
    if (n == 0)
        return std::nullopt;
    IdRange m;
    switch (kind_) {
    case Kind::fixed:
        m = fixed_;
        break;
    case Kind::polynomial:
        m = saturating_power(n, exponent_);
        break;
    case Kind::doubly_exponential:
        m = n >= 7 ? IdRange::full() : IdRange::power_of_two(1u << n);
        break;
    }
    if (!m.holds_at_least(n))
        return std::nullopt;
    return m;
}

IdRange IdRangePolicy::at(std::uint64_t n) const
{
    auto m = evaluate(n);
    if (!m)
        throw InvalidParams("id-range policy " + to_string() + " gives no valid M for n=" + std::to_string(n));
    return *m;
}

bool IdRangePolicy::in_image(IdRange m) const
{
    switch (kind_) {
    case Kind::fixed:
        return m == fixed_;
    case Kind::doubly_exponential:
        for (unsigned n = 1; n <= 7; ++n)
            if (*evaluate(n) == m)
                return true;
        return false;
    case Kind::polynomial: {
        if (m == IdRange::full())
            return true; // saturated for every large n
        // Integer c-th root by bisection over [1, 2^64).
        u128 target = m.last() + 1;
        std::uint64_t lo = 1, hi = ~std::uint64_t{0};
        while (lo <= hi) {
            std::uint64_t mid = lo + (hi - lo) / 2;
            IdRange p = saturating_power(mid, exponent_);
            if (p == m)
                return true;
            if (p == IdRange::full() || p.last() + 1 > target)
                hi = mid - 1;
            else
                lo = mid + 1;
        }
        return false;
    }
    }
    return false;
}

std::string IdRangePolicy::to_string() const
{
    switch (kind_) {
    case Kind::fixed:
        return "fixed:" + fixed_.to_string();
    case Kind::polynomial:
        return "poly:" + std::to_string(exponent_);
    case Kind::doubly_exponential:
        return "doubexp";
    }
    return {};
}

LocalView local_view(const Graph &graph, const IdAssignment &ids, Vertex vertex, const Certificate &certificate)
{
    LocalView view{ids[vertex], {}, std::cref(certificate)};
    view.neighbor_ids.reserve(graph.neighbors(vertex).size());
    for (Vertex w : graph.neighbors(vertex))
        view.neighbor_ids.push_back(ids[w]);
    std::sort(view.neighbor_ids.begin(), view.neighbor_ids.end());
    return view;
}

namespace {

struct LineReader {
    std::istringstream in;
    std::size_t line_no = 0;

    explicit LineReader(std::string_view text) : in(std::string(text)) {}

    // Next non-blank, non-comment line split into tokens; false at end of input.
    bool next(std::vector<std::string> &tokens)
    {
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            std::istringstream ls(line);
            tokens.clear();
            for (std::string t; ls >> t;)
                tokens.push_back(std::move(t));
            if (!tokens.empty())
                return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string &what) const
    {
        throw ParseError("line " + std::to_string(line_no) + ": " + what);
    }

    std::uint32_t index(const std::string &token) const
    {
        auto v = parse_u128(token);
        if (!v || *v > 0xFFFFFFFFu)
            fail("expected a vertex index, got '" + token + "'");
        return static_cast<std::uint32_t>(*v);
    }
};

struct RawGraph {
    std::uint32_t n = 0;
    IdRange range;
    std::vector<std::optional<u128>> ids;
    std::vector<Edge> edges;
};

RawGraph read_graph_file(std::string_view text, bool require_ids)
{
    LineReader reader(text);
    std::vector<std::string> tok;
    if (!reader.next(tok))
        reader.fail("missing header 'g <n> <M>'");
    if (tok.size() != 3 || tok[0] != "g")
        reader.fail("expected header 'g <n> <M>'");
    RawGraph raw;
    raw.n = reader.index(tok[1]);
    if (raw.n == 0)
        reader.fail("graph needs at least one vertex");
    auto range = IdRange::parse(tok[2]);
    if (!range)
        reader.fail("invalid identifier range '" + tok[2] + "'");
    raw.range = *range;
    raw.ids.resize(raw.n);

    while (reader.next(tok)) {
        if (tok[0] == "id") {
            if (tok.size() != 3)
                reader.fail("expected 'id <vertex> <identifier>'");
            if (!raw.edges.empty())
                reader.fail("id lines must precede edge lines");
            auto v = reader.index(tok[1]);
            auto id = parse_u128(tok[2]);
            if (!id)
                reader.fail("invalid identifier '" + tok[2] + "'");
            if (require_ids) {
                if (v >= raw.n)
                    throw InvalidId("line " + std::to_string(reader.line_no) + ": vertex " + tok[1] + " out of range");
                if (raw.ids[v])
                    throw InvalidId("line " + std::to_string(reader.line_no) + ": vertex " + tok[1] +
                                    " has two identifiers");
                raw.ids[v] = *id;
            }
        }
        else if (tok[0] == "e") {
            if (tok.size() != 3)
                reader.fail("expected 'e <u> <v>'");
            raw.edges.emplace_back(reader.index(tok[1]), reader.index(tok[2]));
        }
        else {
            reader.fail("unknown record '" + tok[0] + "'");
        }
    }
    if (require_ids)
        for (std::uint32_t v = 0; v < raw.n; ++v)
            if (!raw.ids[v])
                throw InvalidId("vertex " + std::to_string(v) + " has no identifier");
    return raw;
}

} // namespace

GraphInstance parse_graph(std::string_view text)
{
    auto raw = read_graph_file(text, true);
    std::vector<u128> ids;
    ids.reserve(raw.n);
    for (auto &id : raw.ids)
        ids.push_back(*id);
    IdAssignment assignment(std::move(ids), raw.range);
    return {Graph(raw.n, std::move(raw.edges)), std::move(assignment)};
}

std::string serialize_graph(const Graph &graph, const IdAssignment &ids)
{
    std::string out = "g " + std::to_string(graph.vertex_count()) + " " + ids.range().to_string() + "\n";
    for (Vertex v = 0; v < graph.vertex_count(); ++v)
        out += "id " + std::to_string(v) + " " + to_string(ids[v]) + "\n";
    for (auto [u, v] : graph.edges())
        out += "e " + std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

TargetGraph parse_target(std::string_view text)
{
    auto raw = read_graph_file(text, false);
    return TargetGraph(Graph(raw.n, std::move(raw.edges)));
}

Graph random_h_colorable_graph(std::uint32_t n, const TargetGraph &target, double density, std::uint64_t seed)
{
    if (!(density >= 0.0 && density <= 1.0))
        throw InvalidParams("density must lie in [0, 1]");
    if (target.graph().edges().empty() && density > 0.0)
        throw InvalidParams("target has no edges; only density 0 is meaningful");
    Rng rng(seed);
    std::vector<std::uint32_t> phi(n);
    for (auto &c : phi)
        c = static_cast<std::uint32_t>(rng.below(target.vertex_count()));
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (target.has_edge(phi[u], phi[v]) && rng.chance(density))
                edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

IdAssignment random_id_assignment(std::uint32_t n, IdRange range, std::uint64_t seed)
{
    if (!range.holds_at_least(n))
        throw InvalidParams("identifier range smaller than n");
    Rng rng(seed);
    std::vector<u128> ids;
    ids.reserve(n);
    // Dense ranges: partial Fisher-Yates over the explicit range.
    if (range.count() && *range.count() <= 4 * u128{n} + 64) {
        auto m = static_cast<std::uint64_t>(*range.count());
        std::vector<u128> pool(m);
        for (std::uint64_t i = 0; i < m; ++i)
            pool[i] = i;
        for (std::uint32_t i = 0; i < n; ++i) {
            auto j = i + rng.below(m - i);
            std::swap(pool[i], pool[j]);
            ids.push_back(pool[i]);
        }
        return IdAssignment(std::move(ids), range);
    }
    while (ids.size() < n) {
        u128 id = rng.up_to(range.last());
        if (std::find(ids.begin(), ids.end(), id) == ids.end())
            ids.push_back(id);
    }
    return IdAssignment(std::move(ids), range);
}

Graph random_graph(std::uint32_t n, double density, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            if (rng.chance(density))
                edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

Graph graph_from_edge_mask(std::uint32_t n, std::uint64_t mask)
{
    std::vector<Edge> edges;
    unsigned bit = 0;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v, ++bit)
            if ((mask >> bit) & 1)
                edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

} // namespace gcert
