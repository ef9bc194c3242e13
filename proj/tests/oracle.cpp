#include "oracle.hpp"

#include <stdexcept>

#include "kplan/macros.hpp"

namespace oracle {

namespace {

bool all_in(const std::vector<kplan::Literal>& lits, const LitSet& s) {
  for (const auto& l : lits) {
    if (!s.count(kplan::to_string(l))) return false;
  }
  return true;
}

bool none_in(const std::vector<kplan::Literal>& lits, const LitSet& s) {
  for (const auto& l : lits) {
    if (s.count(kplan::to_string(l))) return false;
  }
  return true;
}

bool is_consistent(const LitSet& s) {
  for (const auto& l : s) {
    if (l[0] != '-' && s.count("-" + l)) return false;
  }
  return true;
}

/// Least closure of the reduct of `rules` w.r.t. candidate `next` and context `ctx`.
/// Returns false if a constraint fires.
bool closure(const std::vector<const kplan::CausationRule*>& rules, const LitSet& next, const LitSet& ctx,
             LitSet& out) {
  std::vector<const kplan::CausationRule*> reduct;
  for (const auto* r : rules) {
    if (none_in(r->post_neg, next) && none_in(r->pre_neg, ctx)) reduct.push_back(r);
  }
  out.clear();
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto* r : reduct) {
      if (!all_in(r->pre_pos, ctx) || !all_in(r->post_pos, out)) continue;
      if (!r->head) return false;
      changed |= out.insert(kplan::to_string(*r->head)).second;
    }
  }
  return true;
}

}  // namespace

Domain from_program(const kplan::KProgram& p) {
  const kplan::KProgram e = kplan::expand_macros(p);
  Domain d;
  for (const auto& decl : e.fluent_decls) {
    if (!decl.head.ground()) throw std::invalid_argument("oracle needs ground declarations");
    d.fluents.push_back(kplan::to_string(decl.head));
  }
  for (const auto& decl : e.action_decls) d.actions.push_back(kplan::to_string(decl.head));
  d.always = e.always_rules;
  d.initial = e.initial_rules;
  d.execs = e.executables;
  return d;
}

std::vector<LitSet> consistent_states(const Domain& d) {
  std::vector<LitSet> out{{}};
  for (const auto& f : d.fluents) {
    std::vector<LitSet> next;
    for (const auto& s : out) {
      next.push_back(s);
      LitSet p = s, n = s;
      p.insert(f);
      n.insert("-" + f);
      next.push_back(p);
      next.push_back(n);
    }
    out = std::move(next);
  }
  return out;
}

std::vector<LitSet> initial_states(const Domain& d) {
  std::vector<const kplan::CausationRule*> rules;
  for (const auto& r : d.initial) rules.push_back(&r);
  for (const auto& r : d.always) {
    if (r.is_static()) rules.push_back(&r);
  }
  std::vector<LitSet> out;
  for (const auto& s : consistent_states(d)) {
    LitSet least;
    if (closure(rules, s, {}, least) && least == s) out.push_back(s);
  }
  return out;
}

bool executable(const Domain& d, const LitSet& s, const LitSet& a) {
  LitSet ctx = s;
  ctx.insert(a.begin(), a.end());
  for (const auto& act : a) {
    bool ok = false;
    for (const auto& e : d.execs) {
      if (kplan::to_string(e.action) == act && all_in(e.pre_pos, ctx) && none_in(e.pre_neg, ctx)) ok = true;
    }
    if (!ok) return false;
  }
  return true;
}

std::vector<LitSet> successors(const Domain& d, const LitSet& s, const LitSet& a) {
  std::vector<const kplan::CausationRule*> rules;
  for (const auto& r : d.always) rules.push_back(&r);
  LitSet ctx = s;
  ctx.insert(a.begin(), a.end());
  std::vector<LitSet> out;
  for (const auto& next : consistent_states(d)) {
    LitSet least;
    if (closure(rules, next, ctx, least) && least == next && is_consistent(next)) out.push_back(next);
  }
  return out;
}

std::vector<LitSet> action_subsets(const Domain& d) {
  std::vector<LitSet> out;
  const std::size_t m = d.actions.size();
  for (std::size_t bits = 0; bits < (std::size_t{1} << m); ++bits) {
    LitSet a;
    for (std::size_t i = 0; i < m; ++i) {
      if (bits >> i & 1) a.insert(d.actions[i]);
    }
    out.push_back(a);
  }
  return out;
}

bool satisfied(const Goal& q, const LitSet& s) {
  for (const auto& l : q.pos) {
    if (!s.count(l)) return false;
  }
  for (const auto& l : q.neg) {
    if (s.count(l)) return false;
  }
  return true;
}

namespace {

/// States reachable by a run of `plan` from `layer`; sets `stuck` if some run cannot continue.
std::vector<LitSet> run(const Domain& d, std::vector<LitSet> layer, const std::vector<LitSet>& plan, bool& stuck) {
  stuck = false;
  for (const auto& a : plan) {
    std::set<LitSet> next;
    for (const auto& s : layer) {
      if (!executable(d, s, a)) {
        stuck = true;
        continue;
      }
      const auto succ = successors(d, s, a);
      if (succ.empty()) stuck = true;
      next.insert(succ.begin(), succ.end());
    }
    layer.assign(next.begin(), next.end());
  }
  return layer;
}

}  // namespace

bool optimistic(const Domain& d, const std::vector<LitSet>& plan, const Goal& q) {
  bool stuck;
  for (const auto& s : run(d, initial_states(d), plan, stuck)) {
    if (satisfied(q, s)) return true;
  }
  return false;
}

bool secure(const Domain& d, const std::vector<LitSet>& plan, const Goal& q) {
  const auto init = initial_states(d);
  if (init.empty()) return false;
  bool stuck;
  const auto last = run(d, init, plan, stuck);
  if (stuck) return false;
  for (const auto& s : last) {
    if (!satisfied(q, s)) return false;
  }
  return true;
}

std::vector<std::vector<LitSet>> all_plans(const Domain& d, int length, int bound) {
  std::vector<LitSet> sets;
  for (const auto& a : action_subsets(d)) {
    if (bound < 0 || static_cast<int>(a.size()) <= bound) sets.push_back(a);
  }
  std::vector<std::vector<LitSet>> out{{}};
  for (int i = 0; i < length; ++i) {
    std::vector<std::vector<LitSet>> next;
    for (const auto& p : out) {
      for (const auto& a : sets) {
        next.push_back(p);
        next.back().push_back(a);
      }
    }
    out = std::move(next);
  }
  return out;
}

LitSet to_lits(const kplan::GroundDomain& g, const kplan::State& s) {
  LitSet out;
  for (kplan::FLit l : s) out.insert(g.literal_text(l));
  return out;
}

LitSet to_names(const kplan::GroundDomain& g, const kplan::ActionSet& a) {
  LitSet out;
  for (int x : a) out.insert(g.action_text(x));
  return out;
}

std::string random_domain(std::mt19937& rng, const RandomOptions& opts) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n = pick(1, opts.max_fluents);
  const int m = pick(0, opts.max_actions);
  auto fluent = [&] { return "f" + std::to_string(pick(0, n - 1)); };
  auto lit = [&] { return (pick(0, 1) ? "-" : "") + fluent(); };
  auto action = [&] { return "a" + std::to_string(pick(0, m - 1)); };
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
  };
  // A body of up to `k` literals; `with_actions` allows action atoms.
  auto body = [&](int k, bool with_actions) {
    std::vector<std::string> parts;
    const int len = pick(0, k);
    for (int i = 0; i < len; ++i) {
      const bool neg = !opts.positive && pick(0, 3) == 0;
      const std::string atom = with_actions && m > 0 && pick(0, 2) == 0 ? action() : lit();
      parts.push_back((neg ? "not " : "") + atom);
    }
    return parts;
  };

  std::string t = "fluents:\n";
  for (int i = 0; i < n; ++i) t += "  f" + std::to_string(i) + ".\n";
  if (m > 0) {
    t += "actions:\n";
    for (int i = 0; i < m; ++i) t += "  a" + std::to_string(i) + ".\n";
  }
  t += "always:\n";
  const int rules = pick(0, 7);
  for (int i = 0; i < rules; ++i) {
    const std::string head = pick(0, 5) == 0 ? "false" : lit();
    const auto post = body(2, false);
    const auto pre = pick(0, 2) == 0 ? std::vector<std::string>{} : body(2, true);
    std::string r = "  caused " + head;
    if (!post.empty()) r += " if " + join(post);
    if (!pre.empty()) r += " after " + join(pre);
    t += r + ".\n";
  }
  if (!opts.positive) {
    for (int i = 0; i < n; ++i) {
      if (pick(0, 2) == 0) t += "  inertial f" + std::to_string(i) + ".\n";
    }
    if (pick(0, 3) == 0) t += "  total " + fluent() + " after " + (m > 0 ? action() : lit()) + ".\n";
  }
  for (int i = 0; i < m; ++i) {
    if (pick(0, 4) == 0) continue;
    const auto pre = body(2, true);
    t += "  executable a" + std::to_string(i) + (pre.empty() ? "" : " if " + join(pre)) + ".\n";
  }
  t += "initially:\n";
  const int init = pick(0, 3);
  for (int i = 0; i < init; ++i) {
    const std::string head = pick(0, 4) == 0 ? "false" : lit();
    const auto post = body(2, false);
    t += "  caused " + head + (post.empty() ? "" : " if " + join(post)) + ".\n";
  }
  if (!opts.positive) {
    for (int i = 0; i < n; ++i) {
      if (pick(0, 1) == 0) t += "  total f" + std::to_string(i) + ".\n";
    }
  }
  return t;
}

}  // namespace oracle
