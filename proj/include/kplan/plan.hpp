#pragma once

// Optimistic plan search.

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "kplan/transition.hpp"

namespace kplan {

enum class Mode { Sequential, Concurrent };

using Plan = std::vector<ActionSet>;

struct Trajectory {
  State initial;
  std::vector<Transition> steps;
  /// Final state: the initial state when there are no steps.
  const State& last() const { return steps.empty() ? initial : steps.back().to; }
};

struct PlanResult {
  Plan plan;
  Trajectory witness;
};

struct SearchOptions {
  Mode mode = Mode::Sequential;
  std::size_t limit = std::numeric_limits<std::size_t>::max();
  /// Plan length; negative means "take it from the query".
  int length = -1;
  /// Cap on distinct (state, remaining steps) pairs explored.
  std::size_t max_states = 1000000;
  /// Cap on candidate action sets examined per state.
  std::size_t max_action_sets = 100000;
};

bool goal_satisfied(const CompiledGoal& q, const State& s);

std::string plan_text(const GroundDomain& g, const Plan& p);

/// Streams the optimistic plans of exactly the requested length in lexicographic
/// order of their action-set sequences, each with one witness trajectory. `sink`
/// returns false to stop early. Returns the number of plans emitted.
std::size_t optimistic_plans(const GroundDomain& g, const CompiledGoal& q, const SearchOptions& opts,
                             const std::function<bool(const PlanResult&)>& sink);

std::vector<PlanResult> optimistic_plans(const GroundDomain& g, const CompiledGoal& q, const SearchOptions& opts);

/// Re-validates a trajectory step by step with the checking route.
bool is_trajectory(const GroundDomain& g, const Trajectory& t);

}  // namespace kplan
