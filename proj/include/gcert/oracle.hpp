#pragma once

#include "gcert/certificate.hpp"
#include "gcert/graph_model.hpp"
#include "gcert/schemes.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gcert {

/// Backtracking budget (assignment attempts) of the homomorphism oracle.
inline constexpr std::uint64_t homomorphism_search_budget = 20'000'000;

/// Lexicographically first homomorphism G -> H: vertices in index order, values
/// ascending. nullopt if none exists; TooLarge when the search budget runs out.
std::optional<std::vector<std::uint32_t>> find_homomorphism(const Graph &graph, const TargetGraph &target);

bool exists_homomorphism(const Graph &graph, const TargetGraph &target);

bool is_homomorphism(const Graph &graph, const TargetGraph &target, std::span<const std::uint32_t> map);

/// BFS two-colouring of every component.
bool is_bipartite(const Graph &graph);

struct AuditBounds {
    std::uint64_t max_n = 4;                   // largest claimed n enumerated
    std::uint64_t max_certificates = 10'000'000;
};

struct AuditReport {
    bool property_holds = false;
    bool certificate_accepted_exists = false;
    std::uint64_t certificates_tried = 0;
    std::uint64_t certificates_accepted = 0;
    /// HASH only: accepted certificates whose induced map u -> L[h(Id(u))] is
    /// not a homomorphism. Must stay zero.
    std::uint64_t non_homomorphic_accepts = 0;
    /// Canonically smallest accepted certificate.
    std::optional<Certificate> witness_certificate;
    /// When nothing is accepted: a node that rejects the first enumerated certificate.
    std::optional<u128> rejecting_node_id;
};

/// Enumerates every syntactically valid payload of `scheme` with claimed n in
/// 1..bounds.max_n and runs every node's verifier on each. Throws TooLarge
/// when the space exceeds bounds.max_certificates.
AuditReport audit_soundness(const Graph &graph, const IdAssignment &ids, Scheme scheme, const SchemeParams &params,
                            const AuditBounds &bounds = {});

/// Number of payloads audit_soundness would enumerate (TooLarge-free).
std::optional<std::uint64_t> audit_space_size(Scheme scheme, const SchemeParams &params, const AuditBounds &bounds);

/// Calls `visit` with every syntactically valid HASH-layout payload in canonical order.
void enumerate_hash_payloads(const HashLayout &layout, std::uint64_t max_n,
                             const std::function<void(const HashPayload &)> &visit);

/// `property=<bool> accepted=<bool> tried=<count> witness=<hex|node-id>`
std::string format_report(const AuditReport &report);

} // namespace gcert
