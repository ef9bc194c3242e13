#include "kplan/plan.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "kplan/error.hpp"

namespace kplan {

bool goal_satisfied(const CompiledGoal& q, const State& s) {
  if (q.unreachable) return false;
  for (FLit l : q.pos) {
    if (!contains(s, l)) return false;
  }
  for (FLit l : q.neg) {
    if (contains(s, l)) return false;
  }
  return true;
}

std::string plan_text(const GroundDomain& g, const Plan& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += "STEP " + std::to_string(i + 1) + ": " + actions_text(g, p[i]) + "\n";
  }
  return out;
}

bool is_trajectory(const GroundDomain& g, const Trajectory& t) {
  if (!is_legal_initial_state(g, t.initial)) return false;
  const State* at = &t.initial;
  for (const auto& step : t.steps) {
    if (step.from != *at || !is_legal_transition(g, step)) return false;
    at = &step.to;
  }
  return true;
}

namespace {

class Planner {
 public:
  Planner(const GroundDomain& g, const CompiledGoal& q, const SearchOptions& opts,
          const std::function<bool(const PlanResult&)>& sink)
      : g_(g), q_(q), opts_(opts), sink_(sink) {
    aso_.bound = opts.mode == Mode::Sequential ? 1 : default_bound(g);
    aso_.cap = opts.max_action_sets;
    aso_.prune_doomed = true;
    length_ = opts.length >= 0 ? opts.length : q.length;
  }

  std::size_t run() {
    std::map<State, State> roots;
    for (auto& s : legal_initial_states(g_)) {
      if (live(s, length_)) roots.emplace(std::move(s), State{});
    }
    if (!roots.empty()) {
      layers_.push_back(std::move(roots));
      dfs();
    }
    return emitted_;
  }

 private:
  using Expansion = std::map<ActionSet, std::vector<State>>;

  const GroundDomain& g_;
  const CompiledGoal& q_;
  const SearchOptions& opts_;
  const std::function<bool(const PlanResult&)>& sink_;
  ActionSetOptions aso_;
  int length_ = 0;

  std::map<State, Expansion> expansions_;
  std::map<std::pair<State, int>, bool> live_;
  std::vector<std::map<State, State>> layers_;  // reachable states with their predecessor
  Plan prefix_;
  std::size_t emitted_ = 0;
  bool stop_ = false;

  /// Executable action sets of s that have at least one successor.
  const Expansion& expand(const State& s) {
    auto it = expansions_.find(s);
    if (it != expansions_.end()) return it->second;
    if (expansions_.size() >= opts_.max_states) {
      throw ResourceError("state cap of " + std::to_string(opts_.max_states) + " exceeded during plan search");
    }
    Expansion e;
    for (auto& a : executable_action_sets(g_, s, aso_)) {
      auto next = successors(g_, s, a);
      if (!next.empty()) e.emplace(std::move(a), std::move(next));
    }
    return expansions_.emplace(s, std::move(e)).first->second;
  }

  /// Whether some trajectory of `remaining` steps from s establishes the goal.
  bool live(const State& s, int remaining) {
    if (remaining == 0) return goal_satisfied(q_, s);
    const auto key = std::make_pair(s, remaining);
    if (auto it = live_.find(key); it != live_.end()) return it->second;
    if (live_.size() >= opts_.max_states) {
      throw ResourceError("state cap of " + std::to_string(opts_.max_states) + " exceeded during plan search");
    }
    bool ok = false;
    for (const auto& [a, next] : expand(s)) {
      for (const auto& t : next) {
        if (live(t, remaining - 1)) {
          ok = true;
          break;
        }
      }
      if (ok) break;
    }
    live_.emplace(key, ok);
    return ok;
  }

  void emit() {
    PlanResult r;
    r.plan = prefix_;
    State at = layers_.back().begin()->first;
    for (std::size_t k = layers_.size() - 1; k > 0; --k) {
      const State& from = layers_[k].at(at);
      r.witness.steps.push_back({from, prefix_[k - 1], at});
      at = from;
    }
    r.witness.initial = at;
    std::reverse(r.witness.steps.begin(), r.witness.steps.end());
    ++emitted_;
    if (!sink_(r) || emitted_ >= opts_.limit) stop_ = true;
  }

  void dfs() {
    const int depth = static_cast<int>(layers_.size()) - 1;
    if (depth == length_) {
      emit();
      return;
    }
    std::set<ActionSet> candidates;
    for (const auto& [s, parent] : layers_.back()) {
      for (const auto& [a, next] : expand(s)) candidates.insert(a);
    }
    const int remaining = length_ - depth - 1;
    for (const auto& a : candidates) {
      std::map<State, State> layer;
      for (const auto& [s, parent] : layers_.back()) {
        const Expansion& e = expand(s);
        const auto it = e.find(a);
        if (it == e.end()) continue;
        for (const auto& t : it->second) {
          if (!layer.count(t) && live(t, remaining)) layer.emplace(t, s);
        }
      }
      if (layer.empty()) continue;
      layers_.push_back(std::move(layer));
      prefix_.push_back(a);
      dfs();
      prefix_.pop_back();
      layers_.pop_back();
      if (stop_) return;
    }
  }
};

}  // namespace

std::size_t optimistic_plans(const GroundDomain& g, const CompiledGoal& q, const SearchOptions& opts,
                             const std::function<bool(const PlanResult&)>& sink) {
  if (opts.limit == 0) return 0;
  return Planner(g, q, opts, sink).run();
}

std::vector<PlanResult> optimistic_plans(const GroundDomain& g, const CompiledGoal& q, const SearchOptions& opts) {
  std::vector<PlanResult> out;
  optimistic_plans(g, q, opts, [&](const PlanResult& r) {
    out.push_back(r);
    return true;
  });
  return out;
}

}  // namespace kplan
