#include "kplan/syntax.hpp"

#include <sstream>

namespace kplan {

bool Atom::ground() const {
  for (const auto& t : args) {
    if (t.is_var) return false;
  }
  return true;
}

std::string to_string(const Term& t) { return t.name; }

std::string to_string(const Atom& a) {
  std::string out = a.pred;
  if (!a.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ',';
      out += a.args[i].name;
    }
    out += ')';
  }
  return out;
}

std::string to_string(const Literal& l) {
  if (l.kind == Kind::Builtin) {
    return to_string(l.atom.args.at(0)) + " = " + to_string(l.atom.args.at(1));
  }
  return (l.negated ? "-" : "") + to_string(l.atom);
}

namespace {

std::string negated_item(const Literal& l) {
  if (l.kind == Kind::Builtin) {
    return to_string(l.atom.args.at(0)) + " <> " + to_string(l.atom.args.at(1));
  }
  return "not " + to_string(l);
}

std::string body(const std::vector<Literal>& pos, const std::vector<Literal>& neg) {
  std::string out;
  for (const auto& l : pos) {
    if (!out.empty()) out += ", ";
    out += to_string(l);
  }
  for (const auto& l : neg) {
    if (!out.empty()) out += ", ";
    out += negated_item(l);
  }
  return out;
}

void append_parts(std::string& out, const std::vector<Literal>& post_pos, const std::vector<Literal>& post_neg,
                  const std::vector<Literal>& pre_pos, const std::vector<Literal>& pre_neg) {
  if (!post_pos.empty() || !post_neg.empty()) out += " if " + body(post_pos, post_neg);
  if (!pre_pos.empty() || !pre_neg.empty()) out += " after " + body(pre_pos, pre_neg);
}

}  // namespace

std::string to_string(const Declaration& d) {
  std::string out = to_string(d.head);
  if (!d.requires_.empty()) out += " requires " + body(d.requires_, {});
  return out + ".";
}

std::string to_string(const CausationRule& r) {
  std::string out = "caused ";
  out += r.head ? to_string(*r.head) : "false";
  append_parts(out, r.post_pos, r.post_neg, r.pre_pos, r.pre_neg);
  return out + ".";
}

std::string to_string(const ExecutabilityCondition& e) {
  std::string out = "executable " + to_string(e.action);
  if (!e.pre_pos.empty() || !e.pre_neg.empty()) out += " if " + body(e.pre_pos, e.pre_neg);
  return out + ".";
}

std::string to_string(const MacroStatement& m) {
  std::string out;
  switch (m.kind) {
    case MacroKind::Inertial: out = "inertial " + to_string(*m.target); break;
    case MacroKind::Default: out = "default " + to_string(*m.target); break;
    case MacroKind::Total: out = "total " + to_string(*m.target); break;
    case MacroKind::Forbidden: out = "forbidden"; break;
    case MacroKind::Nonexecutable:
      out = "nonexecutable " + to_string(*m.target);
      if (!m.pre_pos.empty() || !m.pre_neg.empty()) out += " if " + body(m.pre_pos, m.pre_neg);
      return out + ".";
  }
  if (m.kind == MacroKind::Forbidden) {
    const std::string b = body(m.post_pos, m.post_neg);
    if (!b.empty()) out += " " + b;
    if (!m.pre_pos.empty() || !m.pre_neg.empty()) out += " after " + body(m.pre_pos, m.pre_neg);
    return out + ".";
  }
  append_parts(out, m.post_pos, m.post_neg, m.pre_pos, m.pre_neg);
  return out + ".";
}

std::string to_string(const Query& q) {
  std::string b = body(q.goal_pos, q.goal_neg);
  return (b.empty() ? "" : b + " ") + "? (" + std::to_string(q.plan_length) + ")";
}

std::string to_string(const DatalogRule& r) {
  std::string out = to_string(r.head);
  if (!r.is_fact()) out += " :- " + body(r.pos, r.neg);
  return out + ".";
}

std::string to_string(const DatalogProgram& p) {
  std::string out;
  for (const auto& r : p.rules) out += to_string(r) + "\n";
  return out;
}

std::string to_string(const KProgram& p) {
  std::ostringstream os;
  if (!p.background.rules.empty()) {
    os << "background:\n";
    for (const auto& r : p.background.rules) os << "  " << to_string(r) << "\n";
  }
  os << "fluents:\n";
  for (const auto& d : p.fluent_decls) os << "  " << to_string(d) << "\n";
  os << "actions:\n";
  for (const auto& d : p.action_decls) os << "  " << to_string(d) << "\n";
  os << "always:\n";
  for (const auto& r : p.always_rules) os << "  " << to_string(r) << "\n";
  for (const auto& e : p.executables) os << "  " << to_string(e) << "\n";
  for (const auto& m : p.macros) {
    if (!m.initial) os << "  " << to_string(m) << "\n";
  }
  if (p.no_concurrency) os << "  noConcurrency.\n";
  os << "initially:\n";
  for (const auto& r : p.initial_rules) os << "  " << to_string(r) << "\n";
  for (const auto& m : p.macros) {
    if (m.initial) os << "  " << to_string(m) << "\n";
  }
  if (p.query) os << "goal:\n  " << to_string(*p.query) << "\n";
  return os.str();
}

}  // namespace kplan
