// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "gcert/csp.hpp"
#include "gcert/errors.hpp"
#include "gcert/harness.hpp"
#include "gcert/hashing.hpp"
#include "gcert/oracle.hpp"
#include "gcert/random.hpp"
#include "gcert/schemes.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace gcert;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string &why)
    {
        if (pass)
            detail = why;
        pass = false;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt_seconds(double s)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1fs", s);
    return buf;
}

// Second, from-scratch implementation of the mixer used to cross-check eval_hash.
namespace reference {

std::uint64_t finalize(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t rotate_left(std::uint64_t v, int r) { return (v << r) | (v >> (64 - r)); }

std::uint64_t bucket(u128 index, u128 x, std::uint64_t k)
{
    auto lo = static_cast<std::uint64_t>(index);
    auto hi = static_cast<std::uint64_t>(index >> 64);
    std::uint64_t word = hi == 0 ? finalize(lo) : finalize(lo ^ finalize(hi));
    std::uint64_t a = finalize(static_cast<std::uint64_t>(x) ^ 0x9E3779B97F4A7C15ull);
    std::uint64_t b = finalize(static_cast<std::uint64_t>(x >> 64) ^ 0xC2B2AE3D27D4EB4Full);
    return finalize(a ^ rotate_left(b, 32) ^ word) % k;
}

bool injective(u128 index, const std::vector<u128> &set, std::uint64_t k)
{
    std::set<std::uint64_t> seen;
    for (auto x : set)
        if (!seen.insert(bucket(index, x, k)).second)
            return false;
    return true;
}

} // namespace reference

const TargetGraph k2 = TargetGraph::complete(2);

SchemeParams k2_at(IdRange m) { return {k2, IdRangePolicy::fixed(m), 1.0}; }

// Audit results from criterion 2, reused by criterion 7.
std::map<std::pair<std::uint64_t, std::uint64_t>, AuditReport> hash_reports;

std::uint64_t assignment_seed(std::uint64_t mask, std::uint64_t trial) { return mask * 1000 + trial; }

Outcome completeness_sweep()
{
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    const std::vector<std::pair<std::string, TargetGraph>> targets{
        {"K2", TargetGraph::complete(2)}, {"K3", TargetGraph::complete(3)}, {"C5", TargetGraph::cycle(5)}};
    int accepted = 0;
    std::uint64_t max_probes = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const auto &[name, target] = targets[i % 3];
        auto n = static_cast<std::uint32_t>(1 + i % 12);
        SchemeParams params{target, IdRangePolicy::polynomial(4), 1.0};
        auto g = random_h_colorable_graph(n, target, 0.5, 100 + i);
        auto ids = random_id_assignment(n, params.id_policy.at(n), 7000 + i);
        try {
            auto run = prove_and_run(g, ids, Scheme::hash, params);
            max_probes = std::max(max_probes, run.prover_probes);
            if (run.all_accept)
                ++accepted;
            else
                out.fail("run " + std::to_string(i) + " (" + name + ", n=" + std::to_string(n) + ") rejected");
        } catch (const Error &e) {
            out.fail("run " + std::to_string(i) + " threw " + e.kind());
        }
    }
    double elapsed = seconds_since(start);
    if (elapsed >= 120)
        out.fail("took " + fmt_seconds(elapsed));
    if (out.pass)
        out.detail = std::to_string(accepted) + "/200 all-accept, max probes " + std::to_string(max_probes) + ", " +
                     fmt_seconds(elapsed);
    return out;
}

Outcome exhaustive_soundness()
{
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    auto params = k2_at(IdRange::of(8));
    std::uint64_t cases = 0, bipartite = 0, hash_tried = 0;
    for (std::uint64_t mask = 0; mask < 64; ++mask) {
        auto g = graph_from_edge_mask(4, mask);
        for (std::uint64_t trial = 0; trial < 50; ++trial) {
            auto ids = random_id_assignment(4, IdRange::of(8), assignment_seed(mask, trial));
            for (auto scheme : {Scheme::hash, Scheme::idlist, Scheme::bitmap}) {
                auto report = audit_soundness(g, ids, scheme, params);
                ++cases;
                if (report.certificate_accepted_exists != report.property_holds)
                    out.fail("mask " + std::to_string(mask) + " trial " + std::to_string(trial) + " " +
                             std::string(scheme_name(scheme)) + ": " + format_report(report));
                if (report.non_homomorphic_accepts != 0)
                    out.fail("non-homomorphic accept at mask " + std::to_string(mask));
                if (scheme == Scheme::hash) {
                    bipartite += report.property_holds;
                    hash_tried = report.certificates_tried;
                    hash_reports[{mask, trial}] = report;
                }
            }
        }
    }
    if (hash_tried != 12142)
        out.fail("HASH space " + std::to_string(hash_tried));
    double elapsed = seconds_since(start);
    if (elapsed >= 600)
        out.fail("took " + fmt_seconds(elapsed));
    if (out.pass)
        out.detail = std::to_string(cases) + " cases agree (" + std::to_string(bipartite / 50) +
                     " bipartite graphs), HASH space " + std::to_string(hash_tried) + ", " + fmt_seconds(elapsed);
    return out;
}

Outcome size_table()
{
    Outcome out;
    std::vector<BenchSpec> specs{{12, "K2", k2, IdRangePolicy::polynomial(4)}};
    std::vector<Scheme> schemes{Scheme::hash, Scheme::idlist, Scheme::bitmap};
    auto rows = bench_sizes(specs, schemes);
    const std::uint64_t expected[] = {44, 199, 20736};
    std::string got;
    for (std::size_t i = 0; i < 3; ++i) {
        got += std::string(i ? " " : "") + std::string(scheme_name(rows[i].scheme)) + "=" + std::to_string(rows[i].size_bits);
        if (rows[i].m != "20736" || rows[i].status != "ok" || rows[i].size_bits != expected[i])
            out.fail("row " + std::to_string(i) + ": " + bench_csv(std::span(rows).subspan(i, 1), false));
    }
    if (out.pass)
        out.detail = got + " at n=12, M=20736";
    return out;
}

Outcome loglog_scaling()
{
    Outcome out;
    std::vector<BenchSpec> specs{{8, "K2", k2, IdRangePolicy::fixed(IdRange::power_of_two(64))},
                                 {8, "K2", k2, IdRangePolicy::fixed(IdRange::full())}};
    std::vector<Scheme> schemes{Scheme::hash, Scheme::idlist};
    auto rows = bench_sizes(specs, schemes);
    auto h64 = rows[0].size_bits, l64 = rows[1].size_bits, h128 = rows[2].size_bits, l128 = rows[3].size_bits;
    if (h64 != 36 || h128 != 37)
        out.fail("HASH " + std::to_string(h64) + " -> " + std::to_string(h128));
    if (l128 - l64 != 512)
        out.fail("IDLIST grew by " + std::to_string(l128 - l64));
    if (out.pass)
        out.detail = "HASH " + std::to_string(h64) + " -> " + std::to_string(h128) + ", IDLIST " +
                     std::to_string(l64) + " -> " + std::to_string(l128);
    return out;
}

Outcome hash_family()
{
    Outcome out;
    Rng rng(20240601);
    std::uint64_t minimality_checked = 0;
    for (int t = 0; t < 1000; ++t) {
        auto k = 1 + rng.below(10);
        auto ell = k + rng.below((std::uint64_t{1} << 20) - k + 1);
        std::set<u128> chosen;
        while (chosen.size() < k)
            chosen.insert(rng.below(ell));
        std::vector<u128> set(chosen.begin(), chosen.end());
        auto index = find_perfect_hash(set, k, IdRange::of(ell)).value;
        if (index >= family_size(k, IdRange::of(ell)))
            out.fail("index beyond family at trial " + std::to_string(t));
        if (!reference::injective(index, set, k))
            out.fail("not injective at trial " + std::to_string(t));
        if (k <= 6) {
            ++minimality_checked;
            for (u128 j = 0; j < index; ++j)
                if (reference::injective(j, set, k)) {
                    out.fail("smaller index " + to_string(j) + " works at trial " + std::to_string(t));
                    break;
                }
        }
    }

    std::ifstream golden(GCERT_TEST_DATA "/mixer_golden.txt");
    std::string line;
    std::uint64_t vectors = 0;
    while (std::getline(golden, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream ls(line);
        std::string index, x, k, bucket;
        ls >> index >> x >> k >> bucket;
        auto i = *parse_u128(index), v = *parse_u128(x);
        auto kk = static_cast<std::uint64_t>(*parse_u128(k));
        auto want = static_cast<std::uint64_t>(*parse_u128(bucket));
        if (eval_hash(HashIndex{i}, v, kk) != want || reference::bucket(i, v, kk) != want)
            out.fail("golden mismatch: " + line);
        ++vectors;
    }
    if (vectors == 0)
        out.fail("golden file missing");
    for (int t = 0; t < 100000; ++t) {
        u128 i = rng.next128() >> rng.below(128), x = rng.next128() >> rng.below(128);
        auto k = 1 + rng.below(std::uint64_t{1} << rng.below(64));
        if (eval_hash(HashIndex{i}, x, k) != reference::bucket(i, x, k)) {
            out.fail("random mixer mismatch");
            break;
        }
    }
    if (out.pass)
        out.detail = "1000 searches (" + std::to_string(minimality_checked) + " minimality scans), " +
                     std::to_string(vectors) + " golden + 100000 random vectors agree";
    return out;
}

Outcome oracle_cross_checks()
{
    Outcome out;
    Rng rng(6);
    int bip = 0;
    for (int t = 0; t < 500; ++t) {
        auto n = static_cast<std::uint32_t>(1 + rng.below(6));
        auto g = random_graph(n, rng.unit(), rng.next());
        bool b = is_bipartite(g);
        bip += b;
        if (b != exists_homomorphism(g, k2))
            out.fail("is_bipartite disagrees at trial " + std::to_string(t));
    }
    int graphs = 0;
    for (std::uint32_t n = 1; n <= 4; ++n) {
        std::vector<u128> raw(n);
        for (std::uint32_t v = 0; v < n; ++v)
            raw[v] = v;
        IdAssignment ids(raw, IdRange::of(n));
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * (n - 1) / 2)); ++mask) {
            auto g = graph_from_edge_mask(n, mask);
            ++graphs;
            for (auto k : {2u, 3u}) {
                auto h = TargetGraph::complete(k);
                auto csp = graph_to_csp(g, ids, h);
                auto sol = solve_csp(csp);
                if (sol.has_value() != exists_homomorphism(g, h) || (sol && !csp.satisfied_by(*sol)))
                    out.fail("CSP disagrees on n=" + std::to_string(n) + " mask " + std::to_string(mask));
            }
        }
    }
    if (out.pass)
        out.detail = "500 random graphs (" + std::to_string(bip) + " bipartite), " + std::to_string(graphs) +
                     " labelled graphs x {K2,K3}";
    return out;
}

Outcome csp_scheme()
{
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    auto gparams = k2_at(IdRange::of(8));
    CspParams cparams{2, gparams.id_policy, 1.0};
    auto layout = hash_layout(gparams);
    std::uint64_t compared = 0;
    for (std::uint64_t mask = 0; mask < 64; ++mask) {
        auto g = graph_from_edge_mask(4, mask);
        for (std::uint64_t trial = 0; trial < 50; ++trial) {
            auto ids = random_id_assignment(4, IdRange::of(8), assignment_seed(mask, trial));
            auto csp = graph_to_csp(g, ids, k2);
            auto report = audit_csp_soundness(csp, cparams);
            const auto &graph_report = hash_reports.at({mask, trial});
            if (report.certificate_accepted_exists != report.property_holds ||
                report.property_holds != graph_report.property_holds ||
                report.certificates_tried != graph_report.certificates_tried ||
                report.certificates_accepted != graph_report.certificates_accepted ||
                report.witness_certificate != graph_report.witness_certificate ||
                report.rejecting_node_id != graph_report.rejecting_node_id || report.non_homomorphic_accepts != 0)
                out.fail("CSP audit differs at mask " + std::to_string(mask) + " trial " + std::to_string(trial));

            if (report.property_holds) {
                auto cert = prove_csp(csp, cparams);
                if (run_all_variables(csp, cert, cparams) != std::vector<Decision>(4, Decision::accept))
                    out.fail("honest CSP certificate rejected at mask " + std::to_string(mask));
            }
            if (trial < 5) {
                // Per-node decisions on every certificate of the space.
                enumerate_hash_payloads(layout, 4, [&](const HashPayload &p) {
                    Certificate cert{Scheme::hash, encode_hash_payload(p, layout)};
                    ++compared;
                    if (run_all_variables(csp, cert, cparams) != run_all_nodes(g, ids, cert, gparams).decisions)
                        out.fail("node decisions differ at mask " + std::to_string(mask));
                });
            }
        }
    }

    Constraint parity{{0, 1, 2}, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 1, 1}}};
    CspInstance inst(3, 2, IdAssignment({2, 5, 7}, IdRange::of(8)), {parity});
    auto cert = prove_csp(inst, cparams);
    if (run_all_variables(inst, cert, cparams) != std::vector<Decision>(3, Decision::accept))
        out.fail("honest parity certificate rejected");
    auto zero = decode_hash_payload(cert.payload, cparams.layout());
    zero.values.assign(zero.values.size(), 0);
    Certificate all_zero{Scheme::hash, encode_hash_payload(zero, cparams.layout())};
    if (run_all_variables(inst, all_zero, cparams) != std::vector<Decision>(3, Decision::reject))
        out.fail("all-zero parity certificate not rejected everywhere");
    auto parity_report = audit_csp_soundness(inst, cparams);
    if (!parity_report.certificate_accepted_exists || parity_report.non_homomorphic_accepts != 0)
        out.fail("parity audit: " + format_report(parity_report));

    if (out.pass)
        out.detail = "3200 CSP audits match HASH audits, " + std::to_string(compared) +
                     " certificates compared node-for-node, parity instance ok, " + fmt_seconds(seconds_since(start));
    return out;
}

Outcome adversarial_fuzz()
{
    Outcome out;
    Rng rng(8080);
    const auto policy = IdRangePolicy::polynomial(4);
    SchemeParams params{k2, policy, 1.0};
    auto layout = hash_layout(params);
    std::uint64_t runs = 0, throws = 0, accepts = 0;

    auto check = [&](const Graph &g, const IdAssignment &ids, const Certificate &cert) {
        ++runs;
        try {
            if (run_all_nodes(g, ids, cert, params).all_accept)
                ++accepts;
        } catch (...) {
            ++throws;
        }
    };
    auto random_bits = [&](std::uint64_t len) {
        BitString bits;
        for (std::uint64_t i = 0; i < len; ++i)
            bits.push_back(rng.below(2));
        return bits;
    };

    for (int t = 0; t < 10000; ++t) {
        std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
        Graph g(3, tri);
        auto ids = random_id_assignment(3, policy.at(3), rng.next());
        std::vector<u128> id_values{ids[0], ids[1], ids[2]};

        // Raw payloads under every tag.
        auto raw = random_bits(rng.below(t % 10 == 0 ? 1000 : 120));
        for (auto scheme : {Scheme::hash, Scheme::idlist, Scheme::bitmap})
            check(g, ids, {scheme, raw});

        // Well-formed HASH payloads; half use an index that separates the three ids.
        auto claimed = 1 + rng.below(6);
        auto size = family_size(claimed, policy.at(claimed));
        HashIndex index{rng.up_to(size - 1)};
        if (claimed >= 3 && t % 2 == 0)
            index = search_perfect_hash(id_values, policy.at(claimed), layout.buckets(claimed)).index;
        HashPayload hp{claimed, index, {}};
        for (std::uint64_t i = 0; i < layout.buckets(claimed); ++i)
            hp.values.push_back(static_cast<std::uint32_t>(rng.below(2)));
        check(g, ids, {Scheme::hash, encode_hash_payload(hp, layout)});

        // Well-formed IDLIST payloads listing the three ids plus random extras.
        auto n = 3 + rng.below(4);
        auto m = policy.at(n);
        std::set<u128> listed(id_values.begin(), id_values.end());
        while (listed.size() < n)
            listed.insert(rng.up_to(m.last()));
        IdListPayload lp{n, {}};
        for (auto id : listed)
            lp.records.push_back({id, static_cast<std::uint32_t>(rng.below(2))});
        check(g, ids, {Scheme::idlist, encode_idlist_payload(lp, params)});

        // Well-formed BITMAP payloads for M(n) with n in 3..5.
        auto bn = 3 + rng.below(3);
        BitmapPayload bp;
        for (u128 i = 0; i <= policy.at(bn).last(); ++i)
            bp.colors.push_back(static_cast<std::uint32_t>(rng.below(2)));
        check(g, ids, {Scheme::bitmap, encode_bitmap_payload(bp, params)});
    }
    if (accepts != 0)
        out.fail(std::to_string(accepts) + " all-accept outcomes");
    if (throws != 0)
        out.fail(std::to_string(throws) + " verifier exceptions");
    if (out.pass)
        out.detail = std::to_string(runs) + " payloads, 0 all-accept, 0 exceptions";
    return out;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"completeness sweep", completeness_sweep},
        {"exhaustive soundness", exhaustive_soundness},
        {"size table", size_table},
        {"log log M scaling", loglog_scaling},
        {"hash family", hash_family},
        {"oracle cross-checks", oracle_cross_checks},
        {"CSP scheme", csp_scheme},
        {"adversarial fuzz", adversarial_fuzz},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception &e) {
            outcome.fail(std::string("unexpected exception: ") + e.what());
        }
        failures += !outcome.pass;
        std::printf("%s criterion %zu (%s): %s\n", outcome.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    outcome.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
