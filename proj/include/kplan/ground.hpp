#pragma once

// Legal instances and typed instantiation of a K planning domain.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kplan/datalog.hpp"
#include "kplan/syntax.hpp"

namespace kplan {

struct LegalInstances {
  std::vector<GroundAtom> fluents;  // sorted by text
  std::vector<GroundAtom> actions;  // sorted by text
  bool operator==(const LegalInstances&) const = default;
};

/// A fluent literal over the legal fluent table: 2*atom for f, 2*atom+1 for -f.
using FLit = int;
inline FLit pos_lit(int atom) { return 2 * atom; }
inline FLit neg_lit(int atom) { return 2 * atom + 1; }
inline FLit complement(FLit l) { return l ^ 1; }
inline int atom_of(FLit l) { return l >> 1; }
inline bool is_negative(FLit l) { return (l & 1) != 0; }

/// A ground causation rule with all type literals decided against M.
/// Rules whose type literals make them permanently inapplicable are not compiled.
struct CompiledRule {
  FLit head = -1;  // -1 stands for false
  std::vector<FLit> post_pos, post_neg;
  std::vector<FLit> pre_pos, pre_neg;
  std::vector<int> act_pos, act_neg;
  bool is_static = false;   // no after-part in the source rule
  bool initial = false;
  bool is_constraint() const { return head < 0; }
};

struct CompiledExec {
  int action = 0;
  std::vector<FLit> pre_pos, pre_neg;
  std::vector<int> act_pos, act_neg;
};

struct CompiledGoal {
  std::vector<FLit> pos, neg;
  bool unreachable = false;  // a positive goal atom is not a legal fluent instance
  int length = 0;
};

struct GroundDomain {
  AnswerSet M;
  std::vector<std::string> constants;
  LegalInstances instances;
  std::vector<CausationRule> rules;        // ground always-rules, incl. noConcurrency constraints
  std::vector<ExecutabilityCondition> execs;
  std::vector<CausationRule> initials;
  bool no_concurrency = false;
  std::optional<Query> query;

  std::map<GroundAtom, int> fluent_index, action_index;
  std::vector<CompiledRule> compiled_rules;     // always-rules then initial rules
  std::vector<CompiledExec> compiled_execs;
  std::optional<CompiledGoal> goal;

  int fluent_count() const { return static_cast<int>(instances.fluents.size()); }
  int action_count() const { return static_cast<int>(instances.actions.size()); }
  std::string literal_text(FLit l) const;
  std::string action_text(int a) const { return to_string(instances.actions.at(a)); }
  /// Index of a ground fluent literal; nullopt if its atom is not a legal instance.
  std::optional<FLit> find_literal(const GroundLiteral& l) const;
  std::optional<int> find_action(const GroundAtom& a) const;
};

/// True iff a ground type literal (or '=') holds in M.
bool type_holds(const Literal& l, const AnswerSet& M);

std::vector<std::string> collect_constants(const KProgram& program, const AnswerSet& M);

LegalInstances legal_instances(const std::vector<Declaration>& fluent_decls,
                               const std::vector<Declaration>& action_decls, const AnswerSet& M,
                               const std::vector<std::string>& constants);

struct GroundOptions {
  bool naive = false;  // full substitution over all constants, then filtering
};

/// Typed instantiation of the (macro-expanded) program against M.
GroundDomain typed_ground(const KProgram& program, const AnswerSet& M, GroundOptions opts = {});

/// Expands macros, evaluates the background and grounds.
GroundDomain ground(const KProgram& program, GroundOptions opts = {});

/// The ground program in K syntax; M is emitted as background facts.
std::string dump(const GroundDomain& g);

}  // namespace kplan
