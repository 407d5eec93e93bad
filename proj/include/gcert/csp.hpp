#pragma once

#include "gcert/certificate.hpp"
#include "gcert/graph_model.hpp"
#include "gcert/oracle.hpp"
#include "gcert/schemes.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gcert {

using Tuple = std::vector<std::uint32_t>;

/// An explicit constraint: the tuples of values its scope may take.
struct Constraint {
    std::vector<Vertex> scope;
    std::vector<Tuple> relation; // sorted, duplicate-free after CspInstance construction

    bool allows(std::span<const std::uint32_t> values) const;
};

class CspInstance {
public:
    CspInstance() = default;
    /// Throws InvalidParams on empty or repeated scopes, out-of-range variables,
    /// tuples of the wrong arity or values outside the domain; InvalidId via IdAssignment.
    CspInstance(std::uint32_t variable_count, std::uint32_t domain_size, IdAssignment ids,
                std::vector<Constraint> constraints);

    std::uint32_t variable_count() const { return n_; }
    std::uint32_t domain_size() const { return domain_; }
    const IdAssignment &ids() const { return ids_; }
    const std::vector<Constraint> &constraints() const { return constraints_; }
    /// Indices of the constraints whose scope contains v.
    const std::vector<std::size_t> &incident(Vertex v) const { return incident_[v]; }
    /// Variables sharing a constraint with v, excluding v itself.
    std::vector<Vertex> neighbors(Vertex v) const;

    bool satisfied_by(std::span<const std::uint32_t> assignment) const;

private:
    std::uint32_t n_ = 0;
    std::uint32_t domain_ = 1;
    IdAssignment ids_;
    std::vector<Constraint> constraints_;
    std::vector<std::vector<std::size_t>> incident_;
};

/// One variable per vertex, domain V(H), one binary constraint per edge
/// allowing both orientations of every edge of H.
CspInstance graph_to_csp(const Graph &graph, const IdAssignment &ids, const TargetGraph &target);

/// Upper bound on |D|^n for solve_csp.
inline constexpr std::uint64_t csp_solver_limit = 10'000'000;

/// Lexicographically first solution, or nullopt. Throws TooLarge when |D|^n > 10^7.
std::optional<std::vector<std::uint32_t>> solve_csp(const CspInstance &instance);

struct CspParams {
    std::uint32_t domain_size = 1;
    IdRangePolicy id_policy = IdRangePolicy::polynomial(4);
    double lambda = 1.0;

    HashLayout layout() const { return {domain_size, id_policy, lambda}; }
};

struct CspConstraintView {
    std::vector<u128> scope_ids; // identifiers in scope order
    std::vector<Tuple> relation;

    bool operator==(const CspConstraintView &) const = default;
};

/// A variable's view: its identifier, its incident constraints (by identifier)
/// and the global certificate.
struct CspLocalView {
    u128 own_id = 0;
    std::vector<CspConstraintView> constraints;
    std::reference_wrapper<const Certificate> certificate;
};

CspLocalView csp_local_view(const CspInstance &instance, Vertex v, const Certificate &certificate);

/// HASH-layout certificate (n, h, L) with L over the domain. Throws
/// NotSatisfiable, NoPerfectHash or InvalidId.
Certificate prove_csp(const CspInstance &instance, const CspParams &params, ProverStats *stats = nullptr);

/// Accepts iff every incident constraint's scope, read through L[h(.)], is an allowed tuple.
Decision verify_csp_variable(const CspLocalView &view, const CspParams &params);

std::vector<Decision> run_all_variables(const CspInstance &instance, const Certificate &certificate,
                                        const CspParams &params);

/// Exhaustive audit over every HASH-layout payload with claimed n <= bounds.max_n.
/// non_homomorphic_accepts counts accepted certificates whose induced assignment
/// is not a solution.
AuditReport audit_csp_soundness(const CspInstance &instance, const CspParams &params, const AuditBounds &bounds = {});

Certificate strip_padding(Certificate cert, const CspParams &params);

CspInstance parse_csp(std::string_view text);
std::string serialize_csp(const CspInstance &instance);

} // namespace gcert
