#pragma once

// Security (conformance) of plans: every legal initial state, every trajectory.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kplan/plan.hpp"

namespace kplan {

enum class Failure { Stuck, GoalMissed, NoInitialState };

std::string to_string(Failure f);

struct Counterexample {
  Failure kind = Failure::NoInitialState;
  /// Trajectory from the offending initial state. For Stuck it stops in the state
  /// where the next action set cannot be executed (or has no successor); for
  /// GoalMissed it ends in a state violating the goal; empty for NoInitialState.
  Trajectory trajectory;
};

struct SecurityVerdict {
  bool secure = false;
  std::optional<Counterexample> counterexample;
};

struct SecureOptions {
  /// Cap on the size of any reachable state set S_j.
  std::size_t max_states = 1000000;
};

/// Saturates the state sets S_0, S_1, ..., S_n reachable under the plan.
SecurityVerdict check_secure(const GroundDomain& g, const CompiledGoal& q, const Plan& plan,
                             const SecureOptions& opts = {});

/// Filters the optimistic plans through check_secure, keeping their order.
std::size_t secure_plans(const GroundDomain& g, const CompiledGoal& q, const SearchOptions& opts,
                         const std::function<bool(const PlanResult&)>& sink);

std::vector<Plan> secure_plans(const GroundDomain& g, const CompiledGoal& q, const SearchOptions& opts);

}  // namespace kplan
