#include "gcert/csp.hpp"
#include "gcert/errors.hpp"

#include <algorithm>
#include <sstream>

namespace gcert {

bool Constraint::allows(std::span<const std::uint32_t> values) const
{
    return std::binary_search(relation.begin(), relation.end(), values,
                              [](const auto &a, const auto &b) {
                                  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                              });
}

CspInstance::CspInstance(std::uint32_t variable_count, std::uint32_t domain_size, IdAssignment ids,
                         std::vector<Constraint> constraints)
    : n_(variable_count), domain_(domain_size), ids_(std::move(ids)), constraints_(std::move(constraints)),
      incident_(variable_count)
{
    if (n_ == 0)
        throw InvalidParams("a CSP needs at least one variable");
    if (domain_ == 0)
        throw InvalidParams("the domain must be non-empty");
    if (ids_.size() != n_)
        throw InvalidId("identifier assignment does not cover every variable");
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        auto &c = constraints_[i];
        if (c.scope.empty())
            throw InvalidParams("constraint with an empty scope");
        auto sorted = c.scope;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw InvalidParams("constraint scope repeats a variable");
        if (sorted.back() >= n_)
            throw InvalidParams("constraint scope names an unknown variable");
        for (const auto &t : c.relation) {
            if (t.size() != c.scope.size())
                throw InvalidParams("relation tuple arity differs from the scope");
            for (auto value : t)
                if (value >= domain_)
                    throw InvalidParams("relation tuple value outside the domain");
        }
        std::sort(c.relation.begin(), c.relation.end());
        c.relation.erase(std::unique(c.relation.begin(), c.relation.end()), c.relation.end());
        for (auto v : c.scope)
            incident_[v].push_back(i);
    }
}

std::vector<Vertex> CspInstance::neighbors(Vertex v) const
{
    std::vector<Vertex> out;
    for (auto i : incident_[v])
        for (auto w : constraints_[i].scope)
            if (w != v)
                out.push_back(w);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool CspInstance::satisfied_by(std::span<const std::uint32_t> assignment) const
{
    if (assignment.size() != n_)
        return false;
    Tuple values;
    for (const auto &c : constraints_) {
        values.clear();
        for (auto v : c.scope)
            values.push_back(assignment[v]);
        if (!c.allows(values))
            return false;
    }
    return true;
}

CspInstance graph_to_csp(const Graph &graph, const IdAssignment &ids, const TargetGraph &target)
{
    std::vector<Tuple> relation;
    for (auto [a, b] : target.graph().edges()) {
        relation.push_back({a, b});
        relation.push_back({b, a});
    }
    std::vector<Constraint> constraints;
    for (auto [u, v] : graph.edges())
        constraints.push_back({{u, v}, relation});
    return CspInstance(graph.vertex_count(), target.vertex_count(), ids, std::move(constraints));
}

std::optional<std::vector<std::uint32_t>> solve_csp(const CspInstance &instance)
{
    auto n = instance.variable_count();
    auto d = instance.domain_size();
    std::uint64_t space = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        space *= d;
        if (space > csp_solver_limit)
            throw TooLarge("|D|^n exceeds the CSP solver limit");
    }

    // A constraint is checked once its last (highest-index) variable is assigned.
    std::vector<std::vector<std::size_t>> closing(n);
    for (std::size_t i = 0; i < instance.constraints().size(); ++i) {
        const auto &scope = instance.constraints()[i].scope;
        closing[*std::max_element(scope.begin(), scope.end())].push_back(i);
    }

    std::vector<std::uint32_t> a(n, 0);
    Tuple values;
    auto consistent = [&](Vertex v) {
        for (auto i : closing[v]) {
            const auto &c = instance.constraints()[i];
            values.clear();
            for (auto w : c.scope)
                values.push_back(a[w]);
            if (!c.allows(values))
                return false;
        }
        return true;
    };

    // Iterative backtracking; a[v] == d means "exhausted".
    std::int64_t v = 0;
    a[0] = 0;
    while (v >= 0) {
        if (a[v] == d) {
            a[v] = 0;
            if (--v >= 0)
                ++a[v];
            continue;
        }
        if (!consistent(static_cast<Vertex>(v))) {
            ++a[v];
            continue;
        }
        if (v + 1 == static_cast<std::int64_t>(n))
            return a;
        a[++v] = 0;
    }
    return std::nullopt;
}

CspLocalView csp_local_view(const CspInstance &instance, Vertex v, const Certificate &certificate)
{
    CspLocalView view{instance.ids()[v], {}, std::cref(certificate)};
    for (auto i : instance.incident(v)) {
        const auto &c = instance.constraints()[i];
        CspConstraintView cv;
        for (auto w : c.scope)
            cv.scope_ids.push_back(instance.ids()[w]);
        cv.relation = c.relation;
        view.constraints.push_back(std::move(cv));
    }
    return view;
}

Certificate prove_csp(const CspInstance &instance, const CspParams &params, ProverStats *stats)
{
    if (params.domain_size != instance.domain_size())
        throw InvalidParams("CSP parameters disagree with the instance domain");
    auto n = instance.variable_count();
    auto m = params.id_policy.at(n);
    for (u128 id : instance.ids().ids())
        if (!m.contains(id))
            throw InvalidId("identifier " + to_string(id) + " is not below M(n)=" + m.to_string());
    auto solution = solve_csp(instance);
    if (!solution)
        throw NotSatisfiable("the CSP has no solution");

    auto layout = params.layout();
    auto buckets = layout.buckets(n);
    auto search = search_perfect_hash(instance.ids().ids(), m, buckets);
    if (stats)
        stats->probes = search.probes;
    HashPayload payload{n, search.index, std::vector<std::uint32_t>(buckets, 0)};
    for (Vertex v = 0; v < n; ++v)
        payload.values[eval_hash(search.index, instance.ids()[v], buckets)] = (*solution)[v];
    return {Scheme::hash, encode_hash_payload(payload, layout)};
}

Decision verify_csp_variable(const CspLocalView &view, const CspParams &params)
{
    try {
        const auto &cert = view.certificate.get();
        if (cert.scheme != Scheme::hash)
            return Decision::reject;
        auto payload = decode_hash_payload(cert.payload, params.layout());
        auto buckets = payload.values.size();
        Tuple values;
        for (const auto &c : view.constraints) {
            values.clear();
            for (u128 id : c.scope_ids)
                values.push_back(payload.values[eval_hash(payload.hash_index, id, buckets)]);
            if (!std::binary_search(c.relation.begin(), c.relation.end(), values))
                return Decision::reject;
        }
        return Decision::accept;
    }
    catch (const Error &) {
        return Decision::reject;
    }
}

std::vector<Decision> run_all_variables(const CspInstance &instance, const Certificate &certificate,
                                        const CspParams &params)
{
    std::vector<Decision> out;
    out.reserve(instance.variable_count());
    for (Vertex v = 0; v < instance.variable_count(); ++v)
        out.push_back(verify_csp_variable(csp_local_view(instance, v, certificate), params));
    return out;
}

AuditReport audit_csp_soundness(const CspInstance &instance, const CspParams &params, const AuditBounds &bounds)
{
    auto layout = params.layout();
    u128 space = 0;
    for (std::uint64_t n = 1; n <= bounds.max_n; ++n) {
        auto m = params.id_policy.evaluate(n);
        if (!m)
            continue;
        u128 combos = family_size(n, *m);
        for (std::uint64_t i = 0; i < layout.buckets(n) && combos <= bounds.max_certificates; ++i)
            combos *= params.domain_size;
        space += combos;
        if (space > bounds.max_certificates)
            throw TooLarge("certificate space exceeds the audit bound");
    }

    AuditReport report;
    report.property_holds = solve_csp(instance).has_value();
    Certificate current{Scheme::hash, {}};
    std::vector<CspLocalView> views;
    for (Vertex v = 0; v < instance.variable_count(); ++v)
        views.push_back(csp_local_view(instance, v, current));
    std::vector<std::uint32_t> induced(instance.variable_count());

    enumerate_hash_payloads(layout, bounds.max_n, [&](const HashPayload &p) {
        current.payload = encode_hash_payload(p, layout);
        ++report.certificates_tried;
        for (const auto &view : views) {
            if (verify_csp_variable(view, params) == Decision::reject) {
                if (report.certificates_tried == 1)
                    report.rejecting_node_id = view.own_id;
                return;
            }
        }
        ++report.certificates_accepted;
        if (!report.witness_certificate)
            report.witness_certificate = current;
        for (Vertex v = 0; v < instance.variable_count(); ++v)
            induced[v] = p.values[eval_hash(p.hash_index, instance.ids()[v], p.values.size())];
        if (!instance.satisfied_by(induced))
            ++report.non_homomorphic_accepts;
    });
    report.certificate_accepted_exists = report.certificates_accepted > 0;
    if (report.certificate_accepted_exists)
        report.rejecting_node_id.reset();
    return report;
}

Certificate strip_padding(Certificate cert, const CspParams &params)
{
    if (cert.scheme != Scheme::hash)
        return cert;
    auto exact = hash_layout_length(cert.payload, params.layout());
    if (!exact || *exact > cert.payload.size() || cert.payload.size() - *exact >= 8)
        return cert;
    for (auto i = *exact; i < cert.payload.size(); ++i)
        if (cert.payload[i])
            return cert;
    cert.payload.truncate(*exact);
    return cert;
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string &what)
{
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

} // namespace

CspInstance parse_csp(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::vector<std::vector<std::string>> lines;
    std::vector<std::size_t> line_numbers;
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(std::move(t));
        if (!tok.empty()) {
            lines.push_back(std::move(tok));
            line_numbers.push_back(no);
        }
    }

    std::size_t pos = 0;
    auto number = [&](const std::string &t, std::uint64_t limit) -> std::uint64_t {
        auto v = parse_u128(t);
        if (!v || *v > limit)
            fail(line_numbers[pos], "expected a number up to " + std::to_string(limit) + ", got '" + t + "'");
        return static_cast<std::uint64_t>(*v);
    };

    if (lines.empty() || lines[0].size() != 4 || lines[0][0] != "csp")
        fail(lines.empty() ? 1 : line_numbers[0], "expected header 'csp <nvars> <domain> <M>'");
    auto n = static_cast<std::uint32_t>(number(lines[0][1], 0xFFFFFFFFu));
    auto domain = static_cast<std::uint32_t>(number(lines[0][2], 0xFFFFFFFFu));
    auto range = IdRange::parse(lines[0][3]);
    if (!range)
        fail(line_numbers[0], "invalid identifier range");
    if (n == 0)
        fail(line_numbers[0], "a CSP needs at least one variable");

    std::vector<std::optional<u128>> ids(n);
    std::vector<Constraint> constraints;
    for (pos = 1; pos < lines.size(); ++pos) {
        const auto &tok = lines[pos];
        if (tok[0] == "id") {
            if (tok.size() != 3)
                fail(line_numbers[pos], "expected 'id <var> <identifier>'");
            auto v = number(tok[1], 0xFFFFFFFFu);
            auto id = parse_u128(tok[2]);
            if (!id)
                fail(line_numbers[pos], "invalid identifier");
            if (v >= n || ids[v])
                throw InvalidId("line " + std::to_string(line_numbers[pos]) + ": bad or repeated variable " + tok[1]);
            ids[v] = *id;
        }
        else if (tok[0] == "ct") {
            if (tok.size() < 2)
                fail(line_numbers[pos], "expected 'ct <arity> <v1..vr> <ntuples>'");
            auto arity = number(tok[1], 1024);
            if (tok.size() != arity + 3)
                fail(line_numbers[pos], "scope length does not match the arity");
            Constraint c;
            for (std::uint64_t i = 0; i < arity; ++i)
                c.scope.push_back(static_cast<Vertex>(number(tok[2 + i], 0xFFFFFFFFu)));
            auto count = number(tok[2 + arity], 100'000'000);
            auto header = pos;
            for (std::uint64_t t = 0; t < count; ++t) {
                if (++pos >= lines.size())
                    fail(line_numbers[header], "constraint is missing tuple lines");
                if (lines[pos].size() != arity)
                    fail(line_numbers[pos], "tuple arity differs from the scope");
                Tuple tuple;
                for (const auto &v : lines[pos])
                    tuple.push_back(static_cast<std::uint32_t>(number(v, 0xFFFFFFFFu)));
                c.relation.push_back(std::move(tuple));
            }
            constraints.push_back(std::move(c));
        }
        else {
            fail(line_numbers[pos], "unknown record '" + tok[0] + "'");
        }
    }
    std::vector<u128> assigned;
    for (Vertex v = 0; v < n; ++v) {
        if (!ids[v])
            throw InvalidId("variable " + std::to_string(v) + " has no identifier");
        assigned.push_back(*ids[v]);
    }
    return CspInstance(n, domain, IdAssignment(std::move(assigned), *range), std::move(constraints));
}

std::string serialize_csp(const CspInstance &instance)
{
    std::string out = "csp " + std::to_string(instance.variable_count()) + " " +
                      std::to_string(instance.domain_size()) + " " + instance.ids().range().to_string() + "\n";
    for (Vertex v = 0; v < instance.variable_count(); ++v)
        out += "id " + std::to_string(v) + " " + to_string(instance.ids()[v]) + "\n";
    for (const auto &c : instance.constraints()) {
        out += "ct " + std::to_string(c.scope.size());
        for (auto v : c.scope)
            out += " " + std::to_string(v);
        out += " " + std::to_string(c.relation.size()) + "\n";
        for (const auto &t : c.relation) {
            for (std::size_t i = 0; i < t.size(); ++i)
                out += (i ? " " : "") + std::to_string(t[i]);
            out += "\n";
        }
    }
    return out;
}

} // namespace gcert
