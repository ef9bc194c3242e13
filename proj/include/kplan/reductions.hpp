#pragma once

// Generators turning CNF and QBF instances into K planning problems, plus exhaustive
// oracles used to cross-check the planner on the generated problems.

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace kplan {

/// Clauses over variables 1..num_vars in DIMACS convention: v for x_v, -v for its negation.
struct CNF {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

enum class Quantifier { Exists, Forall };

struct QBF {
  std::vector<std::pair<Quantifier, std::vector<int>>> prefix;  // outermost block first
  CNF matrix;
};

CNF parse_dimacs(const std::string& text);

/// QDIMACS; matrix variables bound by no quantifier join the innermost existential block.
QBF parse_qdimacs(const std::string& text);

/// Largest number of variables the exhaustive oracles accept.
inline constexpr int kOracleVariableCap = 16;

/// Truth-table satisfiability; throws ResourceError above the variable cap.
bool oracle_sat(const CNF& f);
/// Quantifier-tree evaluation; throws ResourceError above the variable cap.
bool oracle_qbf(const QBF& q);

bool satisfies(const CNF& f, const std::vector<bool>& assignment);  // assignment[v] for v in 1..n

/// A generated problem in K syntax, with the candidate plan where the construction fixes one.
struct Reduction {
  std::string problem;
  std::string plan;  // "STEP k: {...}" lines; empty if not applicable
};

/// Optimistic plan of length 0 exists iff the CNF is satisfiable.
Reduction sat_to_optimistic(const CNF& f);

/// For Forall X Exists Y phi: the plan <{alpha}> for "one ? (1)" is secure iff the QBF is true.
/// The construction assumes that all-true satisfies phi; unless `normalize` is set,
/// instances violating this are rejected with InputError. Normalization flips the
/// polarity of variables according to some model of phi, which preserves the truth value;
/// an unsatisfiable matrix is passed through unchanged.
Reduction qbf2_to_security(const QBF& q, bool normalize = false);

/// Proper (plain) variant over a CNF on X: <{alpha}> is secure iff the CNF is unsatisfiable.
Reduction qbf2_conp_variant(const CNF& f);

/// For Exists Z Forall X Exists Y phi: a secure plan of length 1 for "one ? (1)" exists
/// iff the QBF is true. Plans must be searched in concurrent mode.
Reduction qbf3_to_secure_existence(const QBF& q);

/// Deterministic variant for Exists Z Forall X phi (no Y block): a secure plan of length 1
/// exists iff Exists Z Forall X (not phi) is true.
Reduction qbf3_negated_variant(const QBF& q);

/// The empty plan for "f ? (0)" is secure iff phi is satisfiable and psi is not.
Reduction dp_to_empty_secure(const CNF& phi, const CNF& psi);

/// Normalizes prefixes to the shapes the generators expect; empty blocks are kept.
/// Returns {X, Y} for Forall X Exists Y and {Z, X, Y} for Exists Z Forall X Exists Y.
std::pair<std::vector<int>, std::vector<int>> blocks_ae(const QBF& q);
std::vector<std::vector<int>> blocks_eae(const QBF& q);

CNF random_cnf(std::mt19937& rng, int num_vars, int num_clauses, int max_clause_len);

}  // namespace kplan
