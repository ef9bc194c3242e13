#pragma once

// States, reducts, legal initial states, executable action sets and successor states.
//
// Two routes are provided. The checking route (reduct, least_state, is_legal_*) applies
// the definitions to one given candidate in polynomial time. The enumerating route
// (legal_initial_states, executable_action_sets, successors) generates all candidates.

#include <cstddef>
#include <string>
#include <vector>

#include "kplan/ground.hpp"

namespace kplan {

/// A consistent set of fluent literals, sorted ascending.
using State = std::vector<FLit>;
/// A set of legal action ids, sorted ascending.
using ActionSet = std::vector<int>;

struct Transition {
  State from;
  ActionSet actions;
  State to;
  bool operator==(const Transition&) const = default;
};

std::string state_text(const GroundDomain& g, const State& s);
std::string actions_text(const GroundDomain& g, const ActionSet& a);
std::string rule_text(const GroundDomain& g, const CompiledRule& r);

bool consistent(const State& s);
bool contains(const std::vector<int>& sorted, int x);
bool subset(const std::vector<int>& small, const std::vector<int>& sorted_big);

/// The positive domain of a transition: surviving rules and conditions with every
/// default-negated literal removed.
struct Reduct {
  std::vector<CompiledRule> rules;
  std::vector<CompiledExec> execs;
};

Reduct reduct(const GroundDomain& g, const Transition& t);

enum class Closure { Ok, Inconsistent, ConstraintViolation };

struct LeastState {
  Closure outcome = Closure::Ok;
  State state;
};

/// Least set of fluent literals closed under the applicable positive rules
/// w.r.t. s ∪ A ∪ M. Rules with non-empty negative parts are rejected.
LeastState least_state(const std::vector<CompiledRule>& positive_rules, const State& s, const ActionSet& a);

bool is_legal_initial_state(const GroundDomain& g, const State& s0);
bool is_executable(const GroundDomain& g, const State& s, const ActionSet& a);
bool is_legal_transition(const GroundDomain& g, const Transition& t);

std::vector<State> legal_initial_states(const GroundDomain& g);

struct ActionSetOptions {
  /// Largest cardinality considered; negative means "no bound besides the candidates".
  int bound = -1;
  /// Hard cap on the number of candidate sets examined.
  std::size_t cap = 100000;
  /// Skip sets that some applicable constraint without if-part rules out regardless
  /// of the successor. The result is then no longer the full set of executable sets.
  bool prune_doomed = false;
};

/// Default cardinality bound: 1 under noConcurrency, otherwise unbounded.
int default_bound(const GroundDomain& g);

/// All executable action sets w.r.t. s within the bound, in lexicographic order of
/// action ids. Throws ResourceError when more than `cap` sets are examined.
std::vector<ActionSet> executable_action_sets(const GroundDomain& g, const State& s, const ActionSetOptions& opts);

/// All states s' such that <s, A, s'> is a legal transition, assuming A is executable.
std::vector<State> successors(const GroundDomain& g, const State& s, const ActionSet& a);

/// Whether executing A on s leads to at most one state.
bool probe_determined(const GroundDomain& g, const State& s, const ActionSet& a);

/// Syntactic recognizer for plain domains: empty background, fluent-only
/// executability conditions, no default negation in if-parts of always-rules,
/// and the rules forcing exactly one action per step.
bool probe_plain(const KProgram& program);

}  // namespace kplan
