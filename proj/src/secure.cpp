#include "kplan/secure.hpp"

#include <algorithm>
#include <map>

#include "kplan/error.hpp"

namespace kplan {

std::string to_string(Failure f) {
  switch (f) {
    case Failure::Stuck: return "STUCK";
    case Failure::GoalMissed: return "GOAL_MISSED";
    case Failure::NoInitialState: return "NO_INITIAL_STATE";
  }
  return "?";
}

SecurityVerdict check_secure(const GroundDomain& g, const CompiledGoal& q, const Plan& plan,
                             const SecureOptions& opts) {
  // layers[j] maps each state of S_j to one predecessor in S_{j-1}.
  std::vector<std::map<State, State>> layers(1);
  for (auto& s : legal_initial_states(g)) layers[0].emplace(std::move(s), State{});
  if (layers[0].empty()) return {false, Counterexample{Failure::NoInitialState, {}}};

  auto trajectory_to = [&](State at, std::size_t depth) {
    Trajectory t;
    for (std::size_t k = depth; k > 0; --k) {
      const State& from = layers[k].at(at);
      t.steps.push_back({from, plan[k - 1], at});
      at = from;
    }
    t.initial = at;
    std::reverse(t.steps.begin(), t.steps.end());
    return t;
  };

  for (std::size_t j = 0; j < plan.size(); ++j) {
    std::map<State, State> next;
    for (const auto& [s, parent] : layers[j]) {
      std::vector<State> succ;
      if (is_executable(g, s, plan[j])) succ = successors(g, s, plan[j]);
      if (succ.empty()) return {false, Counterexample{Failure::Stuck, trajectory_to(s, j)}};
      for (auto& t : succ) next.emplace(std::move(t), s);
      if (next.size() > opts.max_states) {
        throw ResourceError("state set exceeds " + std::to_string(opts.max_states) + " states at step " +
                            std::to_string(j + 1));
      }
    }
    layers.push_back(std::move(next));
  }
  for (const auto& [s, parent] : layers.back()) {
    if (!goal_satisfied(q, s)) return {false, Counterexample{Failure::GoalMissed, trajectory_to(s, plan.size())}};
  }
  return {true, std::nullopt};
}

std::size_t secure_plans(const GroundDomain& g, const CompiledGoal& q, const SearchOptions& opts,
                         const std::function<bool(const PlanResult&)>& sink) {
  SearchOptions inner = opts;
  inner.limit = std::numeric_limits<std::size_t>::max();
  SecureOptions so;
  so.max_states = opts.max_states;
  std::size_t emitted = 0;
  if (opts.limit == 0) return 0;
  optimistic_plans(g, q, inner, [&](const PlanResult& r) {
    if (!check_secure(g, q, r.plan, so).secure) return true;
    ++emitted;
    return sink(r) && emitted < opts.limit;
  });
  return emitted;
}

std::vector<Plan> secure_plans(const GroundDomain& g, const CompiledGoal& q, const SearchOptions& opts) {
  std::vector<Plan> out;
  secure_plans(g, q, opts, [&](const PlanResult& r) {
    out.push_back(r.plan);
    return true;
  });
  return out;
}

}  // namespace kplan
