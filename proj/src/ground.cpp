#include "kplan/ground.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "kplan/error.hpp"
#include "kplan/macros.hpp"

namespace kplan {

namespace {

using Binding = std::map<std::string, std::string>;

void vars_of(const Atom& a, std::vector<std::string>& out) {
  for (const auto& t : a.args) {
    if (t.is_var && std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
  }
}

void vars_of(const std::vector<Literal>& ls, std::vector<std::string>& out) {
  for (const auto& l : ls) vars_of(l.atom, out);
}

Atom substitute(const Atom& a, const Binding& b) {
  Atom g = a;
  for (auto& t : g.args) {
    if (t.is_var) t = Term::constant(b.at(t.name));
  }
  return g;
}

Literal substitute(const Literal& l, const Binding& b) {
  Literal g = l;
  g.atom = substitute(l.atom, b);
  return g;
}

std::vector<Literal> substitute(const std::vector<Literal>& ls, const Binding& b) {
  std::vector<Literal> out;
  out.reserve(ls.size());
  for (const auto& l : ls) out.push_back(substitute(l, b));
  return out;
}

GroundAtom to_ground(const Atom& a) {
  GroundAtom g;
  g.pred = a.pred;
  for (const auto& t : a.args) g.args.push_back(t.name);
  return g;
}

/// Extends `b` so that every pattern instantiates to one of its candidates, then
/// lets the remaining `free` variables range over `constants`; calls `emit` per binding.
void enumerate(const std::vector<const Atom*>& patterns, const std::vector<const std::vector<GroundAtom>*>& cands,
               const std::vector<std::string>& vars, const std::vector<std::string>& constants,
               const std::function<void(const Binding&)>& emit) {
  Binding b;
  std::function<void(std::size_t)> free_vars = [&](std::size_t i) {
    if (i == vars.size()) {
      emit(b);
      return;
    }
    if (b.count(vars[i])) {
      free_vars(i + 1);
      return;
    }
    for (const auto& c : constants) {
      b[vars[i]] = c;
      free_vars(i + 1);
    }
    b.erase(vars[i]);
  };
  std::function<void(std::size_t)> join = [&](std::size_t i) {
    if (i == patterns.size()) {
      free_vars(0);
      return;
    }
    const Atom& p = *patterns[i];
    for (const auto& g : *cands[i]) {
      if (g.pred != p.pred || g.args.size() != p.args.size()) continue;
      std::vector<std::string> bound_here;
      bool ok = true;
      for (std::size_t k = 0; k < p.args.size() && ok; ++k) {
        const Term& t = p.args[k];
        if (!t.is_var) {
          ok = t.name == g.args[k];
        } else if (auto it = b.find(t.name); it != b.end()) {
          ok = it->second == g.args[k];
        } else {
          b[t.name] = g.args[k];
          bound_here.push_back(t.name);
        }
      }
      if (ok) join(i + 1);
      for (const auto& v : bound_here) b.erase(v);
    }
  };
  join(0);
}

void constants_of(const Atom& a, std::set<std::string>& out) {
  for (const auto& t : a.args) {
    if (!t.is_var) out.insert(t.name);
  }
}

void constants_of(const std::vector<Literal>& ls, std::set<std::string>& out) {
  for (const auto& l : ls) constants_of(l.atom, out);
}

bool text_less(const GroundAtom& a, const GroundAtom& b) { return to_string(a) < to_string(b); }

}  // namespace

bool type_holds(const Literal& l, const AnswerSet& M) {
  if (l.kind == Kind::Builtin) return l.atom.args.at(0).name == l.atom.args.at(1).name;
  return M.contains(ground_literal(l));
}

std::string GroundDomain::literal_text(FLit l) const {
  return (is_negative(l) ? "-" : "") + to_string(instances.fluents.at(atom_of(l)));
}

std::optional<FLit> GroundDomain::find_literal(const GroundLiteral& l) const {
  const auto it = fluent_index.find(l.atom);
  if (it == fluent_index.end()) return std::nullopt;
  return l.negated ? neg_lit(it->second) : pos_lit(it->second);
}

std::optional<int> GroundDomain::find_action(const GroundAtom& a) const {
  const auto it = action_index.find(a);
  if (it == action_index.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> collect_constants(const KProgram& p, const AnswerSet& M) {
  std::set<std::string> out;
  for (const auto& r : p.background.rules) {
    constants_of(r.head.atom, out);
    constants_of(r.pos, out);
    constants_of(r.neg, out);
  }
  for (const auto* decls : {&p.fluent_decls, &p.action_decls}) {
    for (const auto& d : *decls) {
      constants_of(d.head, out);
      constants_of(d.requires_, out);
    }
  }
  for (const auto* rules : {&p.always_rules, &p.initial_rules}) {
    for (const auto& r : *rules) {
      if (r.head) constants_of(r.head->atom, out);
      constants_of(r.post_pos, out);
      constants_of(r.post_neg, out);
      constants_of(r.pre_pos, out);
      constants_of(r.pre_neg, out);
    }
  }
  for (const auto& e : p.executables) {
    constants_of(e.action, out);
    constants_of(e.pre_pos, out);
    constants_of(e.pre_neg, out);
  }
  for (const auto& m : p.macros) {
    if (m.target) constants_of(m.target->atom, out);
    constants_of(m.post_pos, out);
    constants_of(m.post_neg, out);
    constants_of(m.pre_pos, out);
    constants_of(m.pre_neg, out);
  }
  if (p.query) {
    constants_of(p.query->goal_pos, out);
    constants_of(p.query->goal_neg, out);
  }
  for (const auto& l : M.literals()) out.insert(l.atom.args.begin(), l.atom.args.end());
  return {out.begin(), out.end()};
}

namespace {

std::vector<GroundAtom> instances_of(const std::vector<Declaration>& decls, const AnswerSet& M,
                                     const std::vector<std::string>& constants) {
  std::set<GroundAtom> out;
  for (const auto& d : decls) {
    std::vector<const Atom*> patterns;
    std::vector<std::vector<GroundAtom>> cand_store;
    std::vector<const Literal*> builtins;
    for (const auto& t : d.requires_) {
      if (t.kind == Kind::Builtin) {
        builtins.push_back(&t);
        continue;
      }
      patterns.push_back(&t.atom);
      auto& c = cand_store.emplace_back();
      for (const auto& m : M.literals()) {
        if (m.negated == t.negated) c.push_back(m.atom);
      }
    }
    std::vector<const std::vector<GroundAtom>*> cands;
    for (const auto& c : cand_store) cands.push_back(&c);
    std::vector<std::string> vars;
    vars_of(d.head, vars);
    for (const auto* l : builtins) vars_of(l->atom, vars);
    enumerate(patterns, cands, vars, constants, [&](const Binding& b) {
      for (const auto* l : builtins) {
        if (!type_holds(substitute(*l, b), M)) return;
      }
      out.insert(to_ground(substitute(d.head, b)));
    });
  }
  std::vector<GroundAtom> v(out.begin(), out.end());
  std::sort(v.begin(), v.end(), text_less);
  return v;
}

}  // namespace

LegalInstances legal_instances(const std::vector<Declaration>& fluent_decls,
                               const std::vector<Declaration>& action_decls, const AnswerSet& M,
                               const std::vector<std::string>& constants) {
  return {instances_of(fluent_decls, M, constants), instances_of(action_decls, M, constants)};
}

namespace {

/// All dynamic literal occurrences of a statement.
std::vector<const Literal*> dynamic_literals(std::initializer_list<const std::vector<Literal>*> lists,
                                             const std::optional<Literal>& head) {
  std::vector<const Literal*> out;
  if (head && head->kind == Kind::Fluent) out.push_back(&*head);
  for (const auto* ls : lists) {
    for (const auto& l : *ls) {
      if (l.kind == Kind::Fluent || l.kind == Kind::Action) out.push_back(&l);
    }
  }
  return out;
}

class Grounder {
 public:
  Grounder(const LegalInstances& inst, const std::vector<std::string>& constants, bool naive)
      : inst_(inst), constants_(constants), naive_(naive) {
    fluents_.insert(inst.fluents.begin(), inst.fluents.end());
    actions_.insert(inst.actions.begin(), inst.actions.end());
  }

  /// Calls `emit` for each substitution of the statement's variables that keeps all
  /// dynamic atoms legal.
  void run(const std::vector<const Literal*>& dyn, const std::vector<std::string>& vars,
           const std::function<void(const Binding&)>& emit) const {
    if (naive_) {
      enumerate({}, {}, vars, constants_, [&](const Binding& b) {
        for (const auto* l : dyn) {
          const GroundAtom g = to_ground(substitute(l->atom, b));
          if (!(l->kind == Kind::Fluent ? fluents_ : actions_).count(g)) return;
        }
        emit(b);
      });
      return;
    }
    std::vector<const Atom*> patterns;
    std::vector<const std::vector<GroundAtom>*> cands;
    for (const auto* l : dyn) {
      patterns.push_back(&l->atom);
      cands.push_back(l->kind == Kind::Fluent ? &inst_.fluents : &inst_.actions);
    }
    enumerate(patterns, cands, vars, constants_, emit);
  }

 private:
  const LegalInstances& inst_;
  const std::vector<std::string>& constants_;
  bool naive_;
  std::set<GroundAtom> fluents_, actions_;
};

std::vector<CausationRule> ground_rules(const std::vector<CausationRule>& rules, const Grounder& g) {
  std::set<CausationRule> out;
  for (const auto& r : rules) {
    std::vector<std::string> vars;
    if (r.head) vars_of(r.head->atom, vars);
    for (const auto* ls : {&r.post_pos, &r.post_neg, &r.pre_pos, &r.pre_neg}) vars_of(*ls, vars);
    g.run(dynamic_literals({&r.post_pos, &r.post_neg, &r.pre_pos, &r.pre_neg}, r.head), vars,
          [&](const Binding& b) {
            CausationRule c;
            if (r.head) c.head = substitute(*r.head, b);
            c.post_pos = substitute(r.post_pos, b);
            c.post_neg = substitute(r.post_neg, b);
            c.pre_pos = substitute(r.pre_pos, b);
            c.pre_neg = substitute(r.pre_neg, b);
            c.initial = r.initial;
            out.insert(std::move(c));
          });
  }
  return {out.begin(), out.end()};
}

std::vector<ExecutabilityCondition> ground_execs(const std::vector<ExecutabilityCondition>& execs,
                                                 const Grounder& g) {
  std::set<ExecutabilityCondition> out;
  for (const auto& e : execs) {
    std::vector<std::string> vars;
    vars_of(e.action, vars);
    vars_of(e.pre_pos, vars);
    vars_of(e.pre_neg, vars);
    Literal head;
    head.atom = e.action;
    head.kind = Kind::Action;
    std::vector<const Literal*> dyn = dynamic_literals({&e.pre_pos, &e.pre_neg}, std::nullopt);
    dyn.insert(dyn.begin(), &head);
    g.run(dyn, vars, [&](const Binding& b) {
      out.insert({substitute(e.action, b), substitute(e.pre_pos, b), substitute(e.pre_neg, b)});
    });
  }
  return {out.begin(), out.end()};
}

/// Splits the literals of one rule part into fluent ids and action ids, deciding
/// type literals. Returns false if a type literal decides the part against the rule.
bool compile_part(const GroundDomain& g, const std::vector<Literal>& ls, bool negative, std::vector<FLit>& fl,
                  std::vector<int>* acts) {
  for (const auto& l : ls) {
    switch (l.kind) {
      case Kind::Type:
      case Kind::Builtin:
        if (type_holds(l, g.M) == negative) return false;
        break;
      case Kind::Fluent:
        fl.push_back(*g.find_literal(ground_literal(l)));
        break;
      case Kind::Action:
        acts->push_back(*g.find_action(to_ground(l.atom)));
        break;
    }
  }
  return true;
}

void normalize(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void compile(GroundDomain& g) {
  for (int i = 0; i < g.fluent_count(); ++i) g.fluent_index[g.instances.fluents[i]] = i;
  for (int i = 0; i < g.action_count(); ++i) g.action_index[g.instances.actions[i]] = i;

  auto rule = [&](const CausationRule& r) {
    CompiledRule c;
    if (r.head) c.head = *g.find_literal(ground_literal(*r.head));
    c.is_static = r.is_static();
    c.initial = r.initial;
    std::vector<int> unused;
    if (!compile_part(g, r.post_pos, false, c.post_pos, &unused) ||
        !compile_part(g, r.post_neg, true, c.post_neg, &unused) ||
        !compile_part(g, r.pre_pos, false, c.pre_pos, &c.act_pos) ||
        !compile_part(g, r.pre_neg, true, c.pre_neg, &c.act_neg)) {
      return;
    }
    for (auto* v : {&c.post_pos, &c.post_neg, &c.pre_pos, &c.pre_neg, &c.act_pos, &c.act_neg}) normalize(*v);
    g.compiled_rules.push_back(std::move(c));
  };
  for (const auto& r : g.rules) rule(r);
  for (const auto& r : g.initials) rule(r);

  for (const auto& e : g.execs) {
    CompiledExec c;
    c.action = *g.find_action(to_ground(e.action));
    if (!compile_part(g, e.pre_pos, false, c.pre_pos, &c.act_pos) ||
        !compile_part(g, e.pre_neg, true, c.pre_neg, &c.act_neg)) {
      continue;
    }
    for (auto* v : {&c.pre_pos, &c.pre_neg, &c.act_pos, &c.act_neg}) normalize(*v);
    g.compiled_execs.push_back(std::move(c));
  }

  if (g.query) {
    CompiledGoal goal;
    goal.length = g.query->plan_length;
    for (const auto& l : g.query->goal_pos) {
      if (auto f = g.find_literal(ground_literal(l))) {
        goal.pos.push_back(*f);
      } else {
        goal.unreachable = true;
      }
    }
    for (const auto& l : g.query->goal_neg) {
      if (auto f = g.find_literal(ground_literal(l))) goal.neg.push_back(*f);
    }
    normalize(goal.pos);
    normalize(goal.neg);
    g.goal = goal;
  }
}

}  // namespace

GroundDomain typed_ground(const KProgram& program, const AnswerSet& M, GroundOptions opts) {
  const KProgram p = program.macros.empty() ? program : expand_macros(program);
  GroundDomain g;
  g.M = M;
  g.constants = collect_constants(p, M);
  g.instances = legal_instances(p.fluent_decls, p.action_decls, M, g.constants);
  g.no_concurrency = p.no_concurrency;
  g.query = p.query;

  const Grounder grounder(g.instances, g.constants, opts.naive);
  g.rules = ground_rules(p.always_rules, grounder);
  g.initials = ground_rules(p.initial_rules, grounder);
  g.execs = ground_execs(p.executables, grounder);

  if (p.no_concurrency) {
    std::set<CausationRule> rules(g.rules.begin(), g.rules.end());
    for (std::size_t i = 0; i < g.instances.actions.size(); ++i) {
      for (std::size_t j = i + 1; j < g.instances.actions.size(); ++j) {
        CausationRule c;
        for (std::size_t k : {i, j}) {
          Literal a;
          a.kind = Kind::Action;
          a.atom.pred = g.instances.actions[k].pred;
          for (const auto& arg : g.instances.actions[k].args) a.atom.args.push_back(Term::constant(arg));
          c.pre_pos.push_back(a);
        }
        rules.insert(std::move(c));
      }
    }
    g.rules.assign(rules.begin(), rules.end());
  }
  compile(g);
  return g;
}

GroundDomain ground(const KProgram& program, GroundOptions opts) {
  return typed_ground(program, evaluate(program.background), opts);
}

std::string dump(const GroundDomain& g) {
  KProgram p;
  for (const auto& l : g.M.literals()) {
    DatalogRule fact;
    fact.head.atom.pred = l.atom.pred;
    for (const auto& a : l.atom.args) fact.head.atom.args.push_back(Term::constant(a));
    fact.head.negated = l.negated;
    p.background.rules.push_back(std::move(fact));
  }
  auto decls = [](const std::vector<GroundAtom>& atoms) {
    std::vector<Declaration> out;
    for (const auto& a : atoms) {
      Declaration d;
      d.head.pred = a.pred;
      for (const auto& arg : a.args) d.head.args.push_back(Term::constant(arg));
      out.push_back(std::move(d));
    }
    return out;
  };
  p.fluent_decls = decls(g.instances.fluents);
  p.action_decls = decls(g.instances.actions);
  p.always_rules = g.rules;
  p.executables = g.execs;
  p.initial_rules = g.initials;
  p.query = g.query;
  return to_string(p);
}

}  // namespace kplan
