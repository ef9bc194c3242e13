#pragma once

// Abstract syntax of K planning problems and of the Datalog background program.

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace kplan {

/// Which signature a predicate belongs to. `Builtin` is the equality predicate '='.
enum class Kind { Fluent, Action, Type, Builtin };

struct Term {
  bool is_var = false;
  std::string name;

  static Term var(std::string n) { return {true, std::move(n)}; }
  static Term constant(std::string n) { return {false, std::move(n)}; }

  auto operator<=>(const Term&) const = default;
};

struct Atom {
  std::string pred;
  std::vector<Term> args;

  bool ground() const;
  auto operator<=>(const Atom&) const = default;
};

/// An atom or its strong negation. Default negation is expressed by the list a literal sits in.
struct Literal {
  Atom atom;
  bool negated = false;
  Kind kind = Kind::Type;

  bool ground() const { return atom.ground(); }
  Literal complement() const {
    Literal l = *this;
    l.negated = !l.negated;
    return l;
  }
  auto operator<=>(const Literal&) const = default;
};

struct Declaration {
  Atom head;
  std::vector<Literal> requires_;
  auto operator<=>(const Declaration&) const = default;
};

/// caused head if post_pos, not post_neg after pre_pos, not pre_neg.
/// A missing head stands for `false`.
struct CausationRule {
  std::optional<Literal> head;
  std::vector<Literal> post_pos, post_neg;
  std::vector<Literal> pre_pos, pre_neg;
  bool initial = false;

  bool is_static() const { return pre_pos.empty() && pre_neg.empty(); }
  bool is_constraint() const { return !head.has_value(); }
  auto operator<=>(const CausationRule&) const = default;
};

struct ExecutabilityCondition {
  Atom action;
  std::vector<Literal> pre_pos, pre_neg;
  auto operator<=>(const ExecutabilityCondition&) const = default;
};

enum class MacroKind { Inertial, Default, Total, Forbidden, Nonexecutable };

/// Surface statement that expands into core rules. `target` is the fluent literal
/// (inertial/default/total) or the action atom (nonexecutable); forbidden has none.
/// For nonexecutable, the condition B is stored in pre_pos/pre_neg.
struct MacroStatement {
  MacroKind kind = MacroKind::Forbidden;
  std::optional<Literal> target;
  std::vector<Literal> post_pos, post_neg;
  std::vector<Literal> pre_pos, pre_neg;
  bool initial = false;
  auto operator<=>(const MacroStatement&) const = default;
};

struct Query {
  std::vector<Literal> goal_pos, goal_neg;
  int plan_length = 0;
  auto operator<=>(const Query&) const = default;
};

struct DatalogRule {
  Literal head;
  std::vector<Literal> pos, neg;
  bool is_fact() const { return pos.empty() && neg.empty(); }
  auto operator<=>(const DatalogRule&) const = default;
};

struct DatalogProgram {
  std::vector<DatalogRule> rules;
  auto operator<=>(const DatalogProgram&) const = default;
};

struct KProgram {
  DatalogProgram background;
  std::vector<Declaration> fluent_decls;
  std::vector<Declaration> action_decls;
  std::vector<CausationRule> always_rules;
  std::vector<ExecutabilityCondition> executables;
  std::vector<CausationRule> initial_rules;
  std::vector<MacroStatement> macros;
  bool no_concurrency = false;
  std::optional<Query> query;

  auto operator<=>(const KProgram&) const = default;
};

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Literal& l);
std::string to_string(const Declaration& d);
std::string to_string(const CausationRule& r);
std::string to_string(const ExecutabilityCondition& e);
std::string to_string(const MacroStatement& m);
std::string to_string(const Query& q);
std::string to_string(const DatalogRule& r);
std::string to_string(const DatalogProgram& p);

/// Renders the whole program in the sectioned K syntax, background first.
/// The output parses back to an equal program.
std::string to_string(const KProgram& p);

}  // namespace kplan
