#include "kplan/safety.hpp"

#include <set>

#include "kplan/macros.hpp"

namespace kplan {

namespace {

using VarSet = std::set<std::string>;

void vars_of(const Literal& l, VarSet& out) {
  for (const auto& t : l.atom.args) {
    if (t.is_var) out.insert(t.name);
  }
}

bool is_type(const Literal& l) { return l.kind == Kind::Type || l.kind == Kind::Builtin; }

/// `neg_lists` are default-negated; everything else (including the head) counts as "bound".
void check_statement(const std::string& text, const std::vector<const std::vector<Literal>*>& pos_lists,
                     const std::vector<const std::vector<Literal>*>& neg_lists, const Literal* head,
                     std::vector<SafetyDiagnostic>& out) {
  VarSet bound, needed;
  if (head) vars_of(*head, bound);
  for (const auto* ls : pos_lists) {
    for (const auto& l : *ls) vars_of(l, bound);
  }
  for (const auto* ls : neg_lists) {
    for (const auto& l : *ls) vars_of(l, is_type(l) ? needed : bound);
  }
  for (const auto& v : needed) {
    if (!bound.count(v)) {
      out.push_back({text, v, "variable " + v + " occurs only in default-negated type literals"});
    }
  }
}

}  // namespace

std::vector<SafetyDiagnostic> check_safety(const DatalogProgram& program) {
  std::vector<SafetyDiagnostic> out;
  for (const auto& r : program.rules) {
    VarSet bound, all;
    for (const auto& l : r.pos) {
      if (l.kind != Kind::Builtin) vars_of(l, bound);
      vars_of(l, all);
    }
    vars_of(r.head, all);
    for (const auto& l : r.neg) vars_of(l, all);
    for (const auto& v : all) {
      if (!bound.count(v)) {
        out.push_back({to_string(r), v, "variable " + v + " does not occur in a positive body atom"});
      }
    }
  }
  return out;
}

std::vector<SafetyDiagnostic> check_safety(const KProgram& program) {
  const KProgram core = program.macros.empty() ? program : expand_macros(program);
  std::vector<SafetyDiagnostic> out = check_safety(core.background);
  auto rule = [&](const CausationRule& r) {
    check_statement(to_string(r), {&r.post_pos, &r.pre_pos}, {&r.post_neg, &r.pre_neg},
                    r.head ? &*r.head : nullptr, out);
  };
  for (const auto& r : core.always_rules) rule(r);
  for (const auto& r : core.initial_rules) rule(r);
  for (const auto& e : core.executables) {
    Literal head;
    head.atom = e.action;
    head.kind = Kind::Action;
    check_statement(to_string(e), {&e.pre_pos}, {&e.pre_neg}, &head, out);
  }
  return out;
}

}  // namespace kplan
