#include <gtest/gtest.h>

#include "kplan/parser.hpp"
#include "kplan/safety.hpp"
#include "support.hpp"

using namespace kplan;

TEST(Safety, CorpusIsSafe) {
  for (const char* name : {"bw-sussman.k", "bw-incomplete.k", "yale.k", "monkey.k", "monkey-incomplete.k",
                           "rocket.k", "bt.k", "btuc.k", "bmtuck.k"}) {
    EXPECT_TRUE(check_safety(load_program(testing_support::corpus(name))).empty()) << name;
  }
}

TEST(Safety, VariableOnlyUnderNegatedType) {
  const auto d = check_safety(parse("background: t(a). fluents: f. always: caused f if not t(X)."));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].variable, "X");
  EXPECT_EQ(d[0].statement, "caused f if not t(X).");
}

TEST(Safety, HeadBindsVariable) {
  EXPECT_TRUE(check_safety(parse("background: t(a). fluents: f(X) requires t(X). "
                                 "always: caused f(X) if not t(X).")).empty());
}

TEST(Safety, NegatedFluentBindsVariable) {
  // Fluent literals range over legal instances, so they bind variables even when negated.
  EXPECT_TRUE(check_safety(parse("background: t(a). fluents: f(X) requires t(X). g. "
                                 "always: caused g if not f(X), not t(X).")).empty());
}

TEST(Safety, ExecutabilityConditions) {
  const auto d = check_safety(parse("background: t(a). actions: go. always: executable go if not t(Y)."));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].variable, "Y");
}

TEST(Safety, MacrosAreCheckedExpanded) {
  const auto d = check_safety(parse("background: t(a). fluents: f. always: forbidden f, not t(Z)."));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].variable, "Z");
}

TEST(Safety, DatalogRangeRestriction) {
  EXPECT_TRUE(check_safety(parse_background("p(a). q(X) :- p(X), not r(X).")).empty());
  EXPECT_EQ(check_safety(parse_background("q(X) :- not r(X).")).size(), 1u);
  EXPECT_EQ(check_safety(parse_background("q(X) :- X = a.")).size(), 1u);
  EXPECT_EQ(check_safety(parse_background("p(a). q(X,Y) :- p(X).")).size(), 1u);
}
