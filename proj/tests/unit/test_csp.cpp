#include "gcert/csp.hpp"
#include "gcert/errors.hpp"
#include "gcert/harness.hpp"
#include "gcert/random.hpp"

#include <doctest.h>

using namespace gcert;

namespace {

IdAssignment ids_of(std::vector<u128> ids, u128 m) { return IdAssignment(std::move(ids), IdRange::of(m)); }

CspInstance parity_instance()
{
    Constraint parity{{0, 1, 2}, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}}};
    return CspInstance(3, 2, ids_of({2, 5, 7}, 8), {parity});
}

CspParams at_8(std::uint32_t domain) { return {domain, IdRangePolicy::fixed(IdRange::of(8)), 1.0}; }

} // namespace

TEST_CASE("graph_to_csp")
{
    auto edge = parse_graph("g 2 4\nid 0 0\nid 1 3\ne 0 1");
    auto csp = graph_to_csp(edge.graph, edge.ids, TargetGraph::complete(2));
    CHECK(csp.variable_count() == 2);
    CHECK(csp.domain_size() == 2);
    REQUIRE(csp.constraints().size() == 1);
    CHECK(csp.constraints()[0].scope == std::vector<Vertex>{0, 1});
    CHECK(csp.constraints()[0].relation == std::vector<Tuple>{{0, 1}, {1, 0}});

    auto tri = parse_graph("g 3 3\nid 0 0\nid 1 1\nid 2 2\ne 0 1\ne 1 2\ne 0 2");
    auto coloring = graph_to_csp(tri.graph, tri.ids, TargetGraph::complete(3));
    for (const auto &c : coloring.constraints()) {
        CHECK(c.relation.size() == 6);
        for (const auto &t : c.relation)
            CHECK(t[0] != t[1]);
    }
    CHECK(solve_csp(coloring) == std::vector<std::uint32_t>{0, 1, 2});

    auto empty = parse_graph("g 3 3\nid 0 0\nid 1 1\nid 2 2");
    CHECK(graph_to_csp(empty.graph, empty.ids, TargetGraph::cycle(5)).constraints().empty());
}

TEST_CASE("solve_csp examples")
{
    auto c4 = parse_graph("g 4 4\nid 0 0\nid 1 1\nid 2 2\nid 3 3\ne 0 1\ne 1 2\ne 2 3\ne 0 3");
    CHECK(solve_csp(graph_to_csp(c4.graph, c4.ids, TargetGraph::complete(2))) == std::vector<std::uint32_t>{0, 1, 0, 1});

    CspInstance free(4, 3, ids_of({0, 1, 2, 3}, 4), {});
    CHECK(solve_csp(free) == std::vector<std::uint32_t>{0, 0, 0, 0});

    auto k3 = parse_graph("g 3 3\nid 0 0\nid 1 1\nid 2 2\ne 0 1\ne 1 2\ne 0 2");
    CHECK_FALSE(solve_csp(graph_to_csp(k3.graph, k3.ids, TargetGraph::complete(2))));

    CHECK(solve_csp(parity_instance()) == std::vector<std::uint32_t>{0, 0, 1});

    std::vector<u128> many(24);
    for (std::size_t i = 0; i < many.size(); ++i)
        many[i] = i;
    CspInstance big(24, 2, ids_of(many, 24), {});
    CHECK_THROWS_AS(solve_csp(big), TooLarge);
}

TEST_CASE("CspInstance validation")
{
    auto ids = ids_of({0, 1, 2}, 4);
    CHECK_THROWS_AS(CspInstance(3, 2, ids, {{{0, 0}, {{0, 1}}}}), InvalidParams);  // repeated variable
    CHECK_THROWS_AS(CspInstance(3, 2, ids, {{{0, 3}, {{0, 1}}}}), InvalidParams);  // out of range
    CHECK_THROWS_AS(CspInstance(3, 2, ids, {{{0, 1}, {{0, 2}}}}), InvalidParams);  // value outside D
    CHECK_THROWS_AS(CspInstance(3, 2, ids, {{{0, 1}, {{0}}}}), InvalidParams);     // wrong arity
    CHECK_THROWS_AS(CspInstance(3, 2, ids, {{{}, {}}}), InvalidParams);            // empty scope
    CHECK_THROWS_AS(CspInstance(3, 0, ids, {}), InvalidParams);                    // empty domain
    CHECK_THROWS_AS(CspInstance(2, 2, ids, {}), InvalidId);                        // id count mismatch

    CspInstance dup(3, 2, ids, {{{0, 1}, {{1, 0}, {0, 1}, {1, 0}}}});
    CHECK(dup.constraints()[0].relation == std::vector<Tuple>{{0, 1}, {1, 0}});
    CHECK(dup.neighbors(0) == std::vector<Vertex>{1});
    CHECK(dup.neighbors(2).empty());
}

TEST_CASE("CSP certificates on graphs match the graph verifier")
{
    Rng rng(8);
    for (int t = 0; t < 200; ++t) {
        auto n = static_cast<std::uint32_t>(1 + rng.below(7));
        auto g = random_graph(n, 0.5, rng.next());
        auto ids = random_id_assignment(n, IdRange::of(16), rng.next());
        SchemeParams gp{TargetGraph::complete(2), IdRangePolicy::fixed(IdRange::of(16)), 1.0};
        CspParams cp{2, gp.id_policy, 1.0};
        auto csp = graph_to_csp(g, ids, gp.target);

        Certificate cert;
        if (exists_homomorphism(g, gp.target)) {
            cert = prove_csp(csp, cp);
            CHECK(cert == prove_hash(g, ids, gp));
        } else {
            CHECK_THROWS_AS(prove_csp(csp, cp), NotSatisfiable);
            auto claimed = 1 + rng.below(6);
            HashPayload p{claimed, HashIndex{rng.below(static_cast<std::uint64_t>(family_size(claimed, IdRange::of(16))))}, {}};
            for (std::uint64_t i = 0; i < claimed; ++i)
                p.values.push_back(static_cast<std::uint32_t>(rng.below(2)));
            cert = {Scheme::hash, encode_hash_payload(p, hash_layout(gp))};
        }
        auto graph_run = run_all_nodes(g, ids, cert, gp).decisions;
        CHECK(run_all_variables(csp, cert, cp) == graph_run);
    }
}

TEST_CASE("an empty relation rejects every certificate")
{
    CspInstance inst(1, 1, ids_of({3}, 8), {{{0}, {}}});
    CHECK_FALSE(solve_csp(inst));
    CHECK_THROWS_AS(prove_csp(inst, at_8(1)), NotSatisfiable);
    auto report = audit_csp_soundness(inst, at_8(1));
    CHECK(report.certificates_tried > 0);
    CHECK(report.certificates_accepted == 0);
    CHECK(report.rejecting_node_id == u128{3});
}

TEST_CASE("ternary parity constraint")
{
    auto inst = parity_instance();
    auto params = at_8(2);
    auto cert = prove_csp(inst, params);
    CHECK(run_all_variables(inst, cert, params) == std::vector<Decision>(3, Decision::accept));
    auto honest = decode_hash_payload(cert.payload, params.layout());
    CHECK(certificate_size_bits(cert) == gamma_length(3) + index_bits(3, IdRange::of(8)) + 3);

    // Every L under the honest index: accepted everywhere iff the induced
    // assignment has odd parity, rejected everywhere otherwise.
    for (std::uint32_t code = 0; code < 8; ++code) {
        HashPayload p = honest;
        p.values = {code >> 2 & 1, code >> 1 & 1, code & 1};
        Certificate c{Scheme::hash, encode_hash_payload(p, params.layout())};
        std::vector<std::uint32_t> assignment;
        for (Vertex v = 0; v < 3; ++v)
            assignment.push_back(p.values[eval_hash(p.hash_index, inst.ids()[v], 3)]);
        bool odd = (assignment[0] ^ assignment[1] ^ assignment[2]) == 1;
        auto expected = odd ? Decision::accept : Decision::reject;
        CHECK(run_all_variables(inst, c, params) == std::vector<Decision>(3, expected));
        if (code == 0)
            CHECK_FALSE(odd);
    }

    auto report = audit_csp_soundness(inst, params);
    CHECK(report.property_holds);
    CHECK(report.certificate_accepted_exists);
    CHECK(report.non_homomorphic_accepts == 0);
}

TEST_CASE("CSP local views carry identifiers and relations only")
{
    auto inst = parity_instance();
    Certificate cert{Scheme::hash, {}};
    auto view = csp_local_view(inst, 1, cert);
    CHECK(view.own_id == 5);
    REQUIRE(view.constraints.size() == 1);
    CHECK(view.constraints[0].scope_ids == std::vector<u128>{2, 5, 7});
    CHECK(view.constraints[0].relation.size() == 4);
    CHECK(verify_csp_variable(view, at_8(2)) == Decision::reject);
}

TEST_CASE("CSP audits on small graphs")
{
    for (std::uint64_t mask : {0ull, 1ull, 0b001011ull, 0b111111ull}) {
        auto g = graph_from_edge_mask(4, mask);
        auto ids = ids_of({6, 0, 3, 5}, 8);
        for (std::uint32_t k : {2u, 3u}) {
            auto csp = graph_to_csp(g, ids, TargetGraph::complete(k));
            auto report = audit_csp_soundness(csp, at_8(k), {3, 10'000'000});
            CHECK(report.property_holds == exists_homomorphism(g, TargetGraph::complete(k)));
            CHECK(report.certificate_accepted_exists == report.property_holds);
            CHECK(report.non_homomorphic_accepts == 0);
        }
    }
}

TEST_CASE("CSP file format")
{
    auto text = "# parity\ncsp 3 2 8\nid 0 2\nid 1 5\nid 2 7\nct 3 0 1 2 4\n0 0 1\n0 1 0\n1 0 0\n1 1 1\n";
    auto inst = parse_csp(text);
    CHECK(inst.variable_count() == 3);
    CHECK(inst.constraints()[0].relation == parity_instance().constraints()[0].relation);
    auto again = parse_csp(serialize_csp(inst));
    CHECK(serialize_csp(again) == serialize_csp(inst));
    CHECK(again.ids()[2] == 7);

    CHECK_THROWS_AS(parse_csp("csp 2 2 8\nid 0 1\nid 1 2\nct 2 0 1 2\n0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_csp("csp 2 2 8\nid 0 1\n"), InvalidId);
    CHECK_THROWS_AS(parse_csp("g 2 2\n"), ParseError);
}

TEST_CASE("padding is stripped from CSP certificate files")
{
    auto inst = parity_instance();
    auto params = at_8(2);
    auto cert = prove_csp(inst, params);
    auto loaded = strip_padding(deserialize_certificate(serialize_certificate(cert)), params);
    CHECK(loaded == cert);
}
