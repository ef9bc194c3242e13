#include <gtest/gtest.h>

#include "kplan/datalog.hpp"
#include "kplan/error.hpp"
#include "kplan/parser.hpp"

using namespace kplan;

namespace {

std::set<std::string> texts(const AnswerSet& m) {
  std::set<std::string> out;
  for (const auto& l : m.literals()) out.insert(to_string(l));
  return out;
}

}  // namespace

TEST(Stratify, PositiveProgramIsOneStratum) {
  const auto s = stratify(parse_background("location(B) :- block(B). block(a)."));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], (std::vector<std::string>{"block/1", "location/1"}));
}

TEST(Stratify, NegationOrdersStrata) {
  const auto s = stratify(parse_background("q :- not r. r."));
  EXPECT_EQ(s, (std::vector<std::vector<std::string>>{{"r/0"}, {"q/0"}}));
}

TEST(Stratify, StrongNegationIsItsOwnPredicate) {
  const auto s = stratify(parse_background("-p(a). q(X) :- t(X), not -p(X). t(a)."));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1], std::vector<std::string>{"q/1"});
}

TEST(Stratify, NegativeCycleIsRejected) {
  EXPECT_THROW(stratify(parse_background("p :- not p.")), InputError);
  EXPECT_THROW(stratify(parse_background("p :- not q. q :- p.")), InputError);
}

TEST(Evaluate, BlocksBackground) {
  const AnswerSet m = evaluate(parse_background(
      "block(a). block(b). block(c). location(table). location(B) :- block(B)."));
  EXPECT_EQ(texts(m), (std::set<std::string>{"block(a)", "block(b)", "block(c)", "location(a)", "location(b)",
                                             "location(c)", "location(table)"}));
}

TEST(Evaluate, EmptyProgram) { EXPECT_TRUE(evaluate(DatalogProgram{}).empty()); }

TEST(Evaluate, FactsWithStrongNegation) {
  const AnswerSet m = evaluate(parse_background("-r(a,b). r(b,a). s(a,a). s(a,b). s(b,b)."));
  EXPECT_EQ(texts(m), (std::set<std::string>{"-r(a,b)", "r(b,a)", "s(a,a)", "s(a,b)", "s(b,b)"}));
}

TEST(Evaluate, StratifiedNegation) {
  const AnswerSet m = evaluate(parse_background(
      "node(1). node(2). node(3). edge(1,2). edge(2,3)."
      "reach(X,Y) :- edge(X,Y). reach(X,Z) :- reach(X,Y), edge(Y,Z)."
      "unreach(X,Y) :- node(X), node(Y), not reach(X,Y)."));
  EXPECT_TRUE(m.contains({{"reach", {"1", "3"}}, false}));
  EXPECT_TRUE(m.contains({{"unreach", {"3", "1"}}, false}));
  EXPECT_FALSE(m.contains({{"unreach", {"1", "3"}}, false}));
  std::size_t unreach = 0;
  for (const auto& l : m.literals()) unreach += l.atom.pred == "unreach";
  EXPECT_EQ(unreach, 6u);  // 9 pairs minus the 3 reachable ones
}

TEST(Evaluate, BuiltinEquality) {
  const AnswerSet m = evaluate(parse_background("t(a). t(b). diff(X,Y) :- t(X), t(Y), X <> Y."));
  EXPECT_EQ(texts(m), (std::set<std::string>{"t(a)", "t(b)", "diff(a,b)", "diff(b,a)"}));
}

TEST(Evaluate, Errors) {
  EXPECT_THROW(evaluate(parse_background("p(a). -p(a).")), InputError);
  EXPECT_THROW(evaluate(parse_background("p(X) :- not q(X).")), InputError);
  EXPECT_THROW(evaluate(parse_background("p :- not p.")), InputError);
}

TEST(Evaluate, MatchesNaiveRecomputation) {
  // Transitive closure over a chain computed twice with a different rule order.
  const AnswerSet a = evaluate(parse_background(
      "e(1,2). e(2,3). e(3,4). p(X,Y) :- e(X,Y). p(X,Z) :- e(X,Y), p(Y,Z)."));
  const AnswerSet b = evaluate(parse_background(
      "p(X,Z) :- p(X,Y), p(Y,Z). p(X,Y) :- e(X,Y). e(3,4). e(2,3). e(1,2)."));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 3u + 6u);
}
