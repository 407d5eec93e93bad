#pragma once

#include "gcert/certificate.hpp"
#include "gcert/graph_model.hpp"
#include "gcert/schemes.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gcert {

struct RunResult {
    std::vector<Decision> decisions; // indexed by vertex
    bool all_accept = false;
    std::uint64_t size_bits = 0;
    std::uint64_t prover_probes = 0;
};

/// Simulates the network: every vertex runs the verifier on its own local view.
RunResult run_all_nodes(const Graph &graph, const IdAssignment &ids, const Certificate &certificate,
                        const SchemeParams &params);

/// Honest prover followed by run_all_nodes; prover errors propagate.
RunResult prove_and_run(const Graph &graph, const IdAssignment &ids, Scheme scheme, const SchemeParams &params);

struct BenchSpec {
    std::uint32_t n = 1;
    std::string target_name;
    TargetGraph target;
    IdRangePolicy policy = IdRangePolicy::polynomial(4);
};

struct BenchRow {
    std::uint32_t n = 0;
    std::uint32_t nprime = 0;
    std::string policy;
    std::string m;
    Scheme scheme = Scheme::hash;
    std::uint64_t size_bits = 0;
    std::uint64_t prover_probes = 0;
    std::string status; // "ok", "reject", or the prover error kind
    double wall_ms = 0;
};

struct BenchOptions {
    std::uint64_t seed = 1;
    double density = 0.5;
    double lambda = 1.0;
};

/// Generates one H-colourable instance per spec row (seeded) and proves it
/// under each scheme, recording exact payload sizes.
std::vector<BenchRow> bench_sizes(std::span<const BenchSpec> specs, std::span<const Scheme> schemes,
                                  const BenchOptions &options = {});

/// `n,nprime,policy,M,scheme,size_bits,prover_probes,status,wall_ms`; wall
/// times are written as 0 when `with_wall_time` is false.
std::string bench_csv(std::span<const BenchRow> rows, bool with_wall_time = true);

} // namespace gcert
