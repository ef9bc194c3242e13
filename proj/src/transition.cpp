#include "kplan/transition.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "kplan/datalog.hpp"
#include "kplan/error.hpp"
#include "kplan/macros.hpp"

namespace kplan {

bool contains(const std::vector<int>& sorted, int x) { return std::binary_search(sorted.begin(), sorted.end(), x); }

bool subset(const std::vector<int>& small, const std::vector<int>& sorted_big) {
  for (int x : small) {
    if (!contains(sorted_big, x)) return false;
  }
  return true;
}

namespace {

bool disjoint(const std::vector<int>& xs, const std::vector<int>& sorted) {
  for (int x : xs) {
    if (contains(sorted, x)) return false;
  }
  return true;
}

}  // namespace

bool consistent(const State& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (atom_of(s[i]) == atom_of(s[i - 1])) return false;
  }
  return true;
}

std::string state_text(const GroundDomain& g, const State& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += g.literal_text(s[i]);
  }
  return out + "}";
}

std::string actions_text(const GroundDomain& g, const ActionSet& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ", ";
    out += g.action_text(a[i]);
  }
  return out + "}";
}

std::string rule_text(const GroundDomain& g, const CompiledRule& r) {
  std::string out = r.initial ? "initially: caused " : "caused ";
  out += r.is_constraint() ? "false" : g.literal_text(r.head);
  auto part = [&](const std::vector<FLit>& pos, const std::vector<FLit>& neg, const std::vector<int>* apos,
                  const std::vector<int>* aneg) {
    std::vector<std::string> items;
    for (FLit l : pos) items.push_back(g.literal_text(l));
    if (apos) {
      for (int a : *apos) items.push_back(g.action_text(a));
    }
    for (FLit l : neg) items.push_back("not " + g.literal_text(l));
    if (aneg) {
      for (int a : *aneg) items.push_back("not " + g.action_text(a));
    }
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : ", ") + i;
    return s;
  };
  const std::string post = part(r.post_pos, r.post_neg, nullptr, nullptr);
  const std::string pre = part(r.pre_pos, r.pre_neg, &r.act_pos, &r.act_neg);
  if (!post.empty()) out += " if " + post;
  if (!pre.empty()) out += " after " + pre;
  return out + ".";
}

Reduct reduct(const GroundDomain& g, const Transition& t) {
  Reduct out;
  for (const auto& r : g.compiled_rules) {
    if (!disjoint(r.post_neg, t.to) || !disjoint(r.pre_neg, t.from) || !disjoint(r.act_neg, t.actions)) continue;
    CompiledRule p = r;
    p.post_neg.clear();
    p.pre_neg.clear();
    p.act_neg.clear();
    out.rules.push_back(std::move(p));
  }
  for (const auto& e : g.compiled_execs) {
    if (!disjoint(e.pre_neg, t.from) || !disjoint(e.act_neg, t.actions)) continue;
    CompiledExec p = e;
    p.pre_neg.clear();
    p.act_neg.clear();
    out.execs.push_back(std::move(p));
  }
  return out;
}

LeastState least_state(const std::vector<CompiledRule>& rules, const State& s, const ActionSet& a) {
  std::vector<const CompiledRule*> live;
  for (const auto& r : rules) {
    if (!r.post_neg.empty() || !r.pre_neg.empty() || !r.act_neg.empty()) {
      throw std::invalid_argument("least_state expects rules without default negation");
    }
    if (subset(r.pre_pos, s) && subset(r.act_pos, a)) live.push_back(&r);
  }
  std::set<FLit> out;
  std::vector<bool> fired(live.size(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (fired[i]) continue;
      const CompiledRule& r = *live[i];
      if (!std::all_of(r.post_pos.begin(), r.post_pos.end(), [&](FLit l) { return out.count(l) > 0; })) continue;
      if (r.is_constraint()) return {Closure::ConstraintViolation, {}};
      fired[i] = true;
      if (out.insert(r.head).second) {
        if (out.count(complement(r.head))) return {Closure::Inconsistent, {}};
        changed = true;
      }
    }
  }
  return {Closure::Ok, State(out.begin(), out.end())};
}

namespace {

std::vector<CompiledRule> initial_program(std::vector<CompiledRule> rules) {
  std::erase_if(rules, [](const CompiledRule& r) { return !r.initial && !r.is_static; });
  return rules;
}

std::vector<CompiledRule> transition_program(std::vector<CompiledRule> rules) {
  std::erase_if(rules, [](const CompiledRule& r) { return r.initial; });
  return rules;
}

}  // namespace

bool is_legal_initial_state(const GroundDomain& g, const State& s0) {
  if (!consistent(s0)) return false;
  const Reduct red = reduct(g, {{}, {}, s0});
  const LeastState ls = least_state(initial_program(red.rules), {}, {});
  return ls.outcome == Closure::Ok && ls.state == s0;
}

bool is_executable(const GroundDomain& g, const State& s, const ActionSet& a) {
  const Reduct red = reduct(g, {s, a, {}});
  for (int act : a) {
    if (act < 0 || act >= g.action_count()) return false;
    const bool ok = std::any_of(red.execs.begin(), red.execs.end(), [&](const CompiledExec& e) {
      return e.action == act && subset(e.pre_pos, s) && subset(e.act_pos, a);
    });
    if (!ok) return false;
  }
  return true;
}

bool is_legal_transition(const GroundDomain& g, const Transition& t) {
  if (!consistent(t.from) || !is_executable(g, t.from, t.actions)) return false;
  const Reduct red = reduct(g, t);
  const LeastState ls = least_state(transition_program(red.rules), t.from, t.actions);
  return ls.outcome == Closure::Ok && ls.state == t.to;
}

namespace {

/// Enumerates the answer sets of a ground program "head <- pos, not neg" over fluent
/// literals, where a state containing f and -f or firing a constraint is rejected.
/// Only literals occurring default-negated can influence the reduct, so the search
/// guesses their membership and propagates lower and upper bounds.
class StableSearch {
 public:
  StableSearch(int literal_count, std::vector<const CompiledRule*> rules)
      : n_(literal_count), rules_(std::move(rules)), val_(n_, kUnknown), is_guess_(n_, false) {
    for (const auto* r : rules_) {
      for (FLit l : r->post_neg) {
        if (!is_guess_[l]) {
          is_guess_[l] = true;
          guesses_.push_back(l);
        }
      }
    }
    std::sort(guesses_.begin(), guesses_.end());
  }

  std::vector<State> run() {
    search();
    std::sort(found_.begin(), found_.end());
    found_.erase(std::unique(found_.begin(), found_.end()), found_.end());
    return found_;
  }

 private:
  static constexpr signed char kUnknown = -1, kFalse = 0, kTrue = 1;

  int n_;
  std::vector<const CompiledRule*> rules_;
  std::vector<signed char> val_;
  std::vector<char> is_guess_;
  std::vector<FLit> guesses_;
  std::vector<State> found_;

  /// Least model of the rules selected by `use`; returns false if a constraint fires
  /// (only when `constraints` is set).
  bool closure(const std::function<bool(const CompiledRule&)>& use, bool constraints, std::vector<char>& in) const {
    in.assign(n_, false);
    std::vector<char> done(rules_.size(), false);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (done[i]) continue;
        const CompiledRule& r = *rules_[i];
        if (r.is_constraint() && !constraints) continue;
        if (!use(r)) {
          done[i] = true;
          continue;
        }
        if (!std::all_of(r.post_pos.begin(), r.post_pos.end(), [&](FLit l) { return in[l] != 0; })) continue;
        if (r.is_constraint()) return false;
        done[i] = true;
        if (!in[r.head]) {
          in[r.head] = true;
          changed = true;
        }
      }
    }
    return true;
  }

  /// Returns false on conflict; on success `lb` holds the current lower bound.
  bool propagate(std::vector<char>& lb) {
    std::vector<char> ub;
    for (bool changed = true; changed;) {
      changed = false;
      const bool ok = closure(
          [&](const CompiledRule& r) {
            return std::all_of(r.post_neg.begin(), r.post_neg.end(), [&](FLit l) { return val_[l] == kFalse; });
          },
          true, lb);
      if (!ok) return false;
      for (int l = 0; l < n_; ++l) {
        if (!lb[l]) continue;
        if (lb[complement(l)]) return false;
        if (is_guess_[l]) {
          if (val_[l] == kFalse) return false;
          if (val_[l] == kUnknown) {
            val_[l] = kTrue;
            changed = true;
          }
        }
      }
      closure(
          [&](const CompiledRule& r) {
            return std::none_of(r.post_neg.begin(), r.post_neg.end(), [&](FLit l) { return val_[l] == kTrue; });
          },
          false, ub);
      for (FLit l : guesses_) {
        if (ub[l]) continue;
        if (val_[l] == kTrue) return false;
        if (val_[l] == kUnknown) {
          val_[l] = kFalse;
          changed = true;
        }
      }
    }
    return true;
  }

  void search() {
    std::vector<char> lb;
    const std::vector<signed char> saved = val_;
    if (!propagate(lb)) {
      val_ = saved;
      return;
    }
    const auto open = std::find_if(guesses_.begin(), guesses_.end(), [&](FLit l) { return val_[l] == kUnknown; });
    if (open == guesses_.end()) {
      State s;
      for (int l = 0; l < n_; ++l) {
        if (lb[l]) s.push_back(l);
      }
      found_.push_back(std::move(s));
    } else {
      const FLit l = *open;
      const std::vector<signed char> branch = val_;
      for (signed char v : {kFalse, kTrue}) {
        val_ = branch;
        val_[l] = v;
        search();
      }
    }
    val_ = saved;
  }
};

}  // namespace

std::vector<State> legal_initial_states(const GroundDomain& g) {
  std::vector<const CompiledRule*> rules;
  for (const auto& r : g.compiled_rules) {
    if (r.initial || r.is_static) rules.push_back(&r);
  }
  return StableSearch(2 * g.fluent_count(), std::move(rules)).run();
}

std::vector<State> successors(const GroundDomain& g, const State& s, const ActionSet& a) {
  std::vector<const CompiledRule*> rules;
  for (const auto& r : g.compiled_rules) {
    if (r.initial) continue;
    if (subset(r.pre_pos, s) && disjoint(r.pre_neg, s) && subset(r.act_pos, a) && disjoint(r.act_neg, a)) {
      rules.push_back(&r);
    }
  }
  return StableSearch(2 * g.fluent_count(), std::move(rules)).run();
}

int default_bound(const GroundDomain& g) { return g.no_concurrency ? 1 : -1; }

std::vector<ActionSet> executable_action_sets(const GroundDomain& g, const State& s, const ActionSetOptions& opts) {
  // Executability conditions whose fluent parts hold in s, grouped by action.
  std::vector<std::vector<const CompiledExec*>> conds(g.action_count());
  for (const auto& e : g.compiled_execs) {
    if (subset(e.pre_pos, s) && disjoint(e.pre_neg, s)) conds[e.action].push_back(&e);
  }
  std::vector<int> cand;
  for (int a = 0; a < g.action_count(); ++a) {
    if (!conds[a].empty()) cand.push_back(a);
  }
  std::vector<const CompiledRule*> doom;
  if (opts.prune_doomed) {
    for (const auto& r : g.compiled_rules) {
      if (!r.initial && r.is_constraint() && r.post_pos.empty() && r.post_neg.empty() && subset(r.pre_pos, s) &&
          disjoint(r.pre_neg, s)) {
        doom.push_back(&r);
      }
    }
  }
  const std::size_t bound = opts.bound < 0 ? cand.size() : static_cast<std::size_t>(opts.bound);

  std::vector<ActionSet> out;
  std::size_t examined = 0;
  ActionSet a;
  auto executable = [&] {
    for (int act : a) {
      const bool ok = std::any_of(conds[act].begin(), conds[act].end(), [&](const CompiledExec* e) {
        return subset(e->act_pos, a) && disjoint(e->act_neg, a);
      });
      if (!ok) return false;
    }
    return true;
  };
  // `last` is the largest action id decided so far; candidates above it may still join.
  auto doomed = [&](int last) {
    return std::any_of(doom.begin(), doom.end(), [&](const CompiledRule* r) {
      if (!subset(r->act_pos, a)) return false;
      return std::all_of(r->act_neg.begin(), r->act_neg.end(), [&](int x) {
        return !contains(a, x) && (x <= last || !std::binary_search(cand.begin(), cand.end(), x));
      });
    });
  };
  std::function<void(std::size_t, int)> visit = [&](std::size_t from, int last) {
    if (++examined > opts.cap) {
      throw ResourceError("more than " + std::to_string(opts.cap) + " candidate action sets in state " +
                          state_text(g, s));
    }
    if (doomed(last)) return;
    if (executable()) out.push_back(a);
    if (a.size() >= bound) return;
    for (std::size_t i = from; i < cand.size(); ++i) {
      a.push_back(cand[i]);
      visit(i + 1, cand[i]);
      a.pop_back();
    }
  };
  visit(0, -1);
  return out;
}

bool probe_determined(const GroundDomain& g, const State& s, const ActionSet& a) {
  return successors(g, s, a).size() <= 1;
}

bool probe_plain(const KProgram& program) {
  if (!program.background.rules.empty()) return false;
  const KProgram p = expand_macros(program);
  for (const auto& e : p.executables) {
    for (const auto* ls : {&e.pre_pos, &e.pre_neg}) {
      for (const auto& l : *ls) {
        if (l.kind != Kind::Fluent) return false;
      }
    }
  }
  for (const auto& r : p.always_rules) {
    if (!r.post_neg.empty()) return false;
  }
  const GroundDomain g = typed_ground(p, AnswerSet{});
  const int m = g.action_count();
  if (m == 0) return true;
  auto action_literal = [&](int a) {
    Literal l;
    l.kind = Kind::Action;
    l.atom.pred = g.instances.actions[a].pred;
    for (const auto& arg : g.instances.actions[a].args) l.atom.args.push_back(Term::constant(arg));
    return l;
  };
  auto sorted_unique = [](std::vector<Literal> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  // A constraint "caused false after pos, not neg" with no if-part, compared as sets.
  auto has_constraint = [&](const std::vector<Literal>& pos, const std::vector<Literal>& neg) {
    const auto want_pos = sorted_unique(pos), want_neg = sorted_unique(neg);
    return std::any_of(g.rules.begin(), g.rules.end(), [&](const CausationRule& r) {
      return !r.head && r.post_pos.empty() && r.post_neg.empty() && sorted_unique(r.pre_pos) == want_pos &&
             sorted_unique(r.pre_neg) == want_neg;
    });
  };
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (!has_constraint({action_literal(i), action_literal(j)}, {})) return false;
    }
  }
  std::vector<Literal> all;
  for (int a = 0; a < m; ++a) all.push_back(action_literal(a));
  return has_constraint({}, all);
}

}  // namespace kplan
