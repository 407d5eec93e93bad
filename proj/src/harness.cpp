#include "gcert/harness.hpp"
#include "gcert/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

namespace gcert {

RunResult run_all_nodes(const Graph &graph, const IdAssignment &ids, const Certificate &certificate,
                        const SchemeParams &params)
{
    RunResult result;
    result.size_bits = certificate_size_bits(certificate);
    result.decisions.reserve(graph.vertex_count());
    for (Vertex v = 0; v < graph.vertex_count(); ++v)
        result.decisions.push_back(verify(local_view(graph, ids, v, certificate), params));
    result.all_accept = std::all_of(result.decisions.begin(), result.decisions.end(),
                                    [](Decision d) { return d == Decision::accept; });
    return result;
}

RunResult prove_and_run(const Graph &graph, const IdAssignment &ids, Scheme scheme, const SchemeParams &params)
{
    ProverStats stats;
    auto cert = prove(scheme, graph, ids, params, &stats);
    auto result = run_all_nodes(graph, ids, cert, params);
    result.prover_probes = stats.probes;
    return result;
}

std::vector<BenchRow> bench_sizes(std::span<const BenchSpec> specs, std::span<const Scheme> schemes,
                                  const BenchOptions &options)
{
    std::vector<BenchRow> rows;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto &spec = specs[i];
        // Every row gets its own stream so rows are independent of each other.
        std::uint64_t row_seed = options.seed * 0x9E3779B97F4A7C15ull + i;
        auto m = spec.policy.at(spec.n);
        double density = spec.target.graph().edges().empty() ? 0.0 : options.density;
        auto graph = random_h_colorable_graph(spec.n, spec.target, density, row_seed);
        auto ids = random_id_assignment(spec.n, m, row_seed ^ 0x5bd1e995u);
        SchemeParams params{spec.target, spec.policy, options.lambda};
        for (auto scheme : schemes) {
            BenchRow row;
            row.n = spec.n;
            row.nprime = spec.target.vertex_count();
            row.policy = spec.policy.to_string();
            row.m = m.to_string();
            row.scheme = scheme;
            auto start = std::chrono::steady_clock::now();
            try {
                auto result = prove_and_run(graph, ids, scheme, params);
                row.size_bits = result.size_bits;
                row.prover_probes = result.prover_probes;
                row.status = result.all_accept ? "ok" : "reject";
            }
            catch (const Error &e) {
                row.status = e.kind();
            }
            row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string bench_csv(std::span<const BenchRow> rows, bool with_wall_time)
{
    std::string out = "n,nprime,policy,M,scheme,size_bits,prover_probes,status,wall_ms\n";
    for (const auto &r : rows) {
        char wall[32];
        std::snprintf(wall, sizeof wall, "%.3f", with_wall_time ? r.wall_ms : 0.0);
        out += std::to_string(r.n) + "," + std::to_string(r.nprime) + "," + r.policy + "," + r.m + "," +
               std::string(scheme_name(r.scheme)) + "," + std::to_string(r.size_bits) + "," +
               std::to_string(r.prover_probes) + "," + r.status + "," + wall + "\n";
    }
    return out;
}

} // namespace gcert
