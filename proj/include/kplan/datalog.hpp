#pragma once

// Bottom-up evaluation of the stratified normal background program.

#include <compare>
#include <set>
#include <string>
#include <vector>

#include "kplan/syntax.hpp"

namespace kplan {

struct GroundAtom {
  std::string pred;
  std::vector<std::string> args;
  auto operator<=>(const GroundAtom&) const = default;
};

struct GroundLiteral {
  GroundAtom atom;
  bool negated = false;
  auto operator<=>(const GroundLiteral&) const = default;
};

std::string to_string(const GroundAtom& a);
std::string to_string(const GroundLiteral& l);

/// Converts a variable-free syntactic literal; throws InputError if it has variables.
GroundLiteral ground_literal(const Literal& l);

/// The unique answer set M of a stratified program: a consistent set of ground
/// type literals (strongly negated facts are allowed).
class AnswerSet {
 public:
  AnswerSet() = default;
  explicit AnswerSet(std::set<GroundLiteral> lits) : lits_(std::move(lits)) {}

  bool contains(const GroundLiteral& l) const { return lits_.count(l) > 0; }
  const std::set<GroundLiteral>& literals() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }

  bool operator==(const AnswerSet&) const = default;

 private:
  std::set<GroundLiteral> lits_;
};

/// Predicate key used for dependency analysis, e.g. "block/1" or "-r/2".
std::string predicate_key(const Literal& l);

/// Orders predicates into strata so that negative dependencies point strictly
/// downwards. Each stratum is a sorted list of predicate keys. Throws InputError
/// naming a cycle through negation.
std::vector<std::vector<std::string>> stratify(const DatalogProgram& program);

/// Iterated least fixpoint, stratum by stratum. Throws InputError if the program is
/// unsafe, unstratifiable, or derives both p and -p.
AnswerSet evaluate(const DatalogProgram& program);

}  // namespace kplan
