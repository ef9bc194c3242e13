#include <gtest/gtest.h>

#include "kplan/error.hpp"
#include "kplan/macros.hpp"
#include "kplan/parser.hpp"

using namespace kplan;

namespace {

std::vector<std::string> expanded(const std::string& text, bool initial = false) {
  const KProgram p = expand_macros(parse(text));
  EXPECT_TRUE(p.macros.empty());
  std::vector<std::string> out;
  for (const auto& r : initial ? p.initial_rules : p.always_rules) out.push_back(to_string(r));
  return out;
}

}  // namespace

TEST(Macros, Inertial) {
  EXPECT_EQ(expanded("fluents: f. always: inertial f."),
            std::vector<std::string>{"caused f if not -f after f."});
  EXPECT_EQ(expanded("fluents: f. always: inertial -f."),
            std::vector<std::string>{"caused -f if not f after -f."});
}

TEST(Macros, InertialWithConditions) {
  EXPECT_EQ(expanded("fluents: f. g. actions: a. always: inertial f if g after not a."),
            std::vector<std::string>{"caused f if g, not -f after f, not a."});
}

TEST(Macros, Default) {
  EXPECT_EQ(expanded("fluents: f. always: default -f."), std::vector<std::string>{"caused -f if not f."});
}

TEST(Macros, Total) {
  EXPECT_EQ(expanded("fluents: f. actions: a. always: total f after a."),
            (std::vector<std::string>{"caused f if not -f after a.", "caused -f if not f after a."}));
  EXPECT_THROW(expanded("fluents: f. always: total -f."), InputError);
}

TEST(Macros, Forbidden) {
  EXPECT_EQ(expanded("fluents: f. g. always: forbidden f, not g."),
            std::vector<std::string>{"caused false if f, not g."});
}

TEST(Macros, Nonexecutable) {
  EXPECT_EQ(expanded("fluents: f. actions: a. always: nonexecutable a if f."),
            std::vector<std::string>{"caused false after a, f."});
}

TEST(Macros, InitiallySectionStaysInitial) {
  EXPECT_EQ(expanded("fluents: f. initially: total f.", true),
            (std::vector<std::string>{"caused f if not -f.", "caused -f if not f."}));
  EXPECT_TRUE(expanded("fluents: f. initially: total f.").empty());
}

TEST(Macros, CoreRulesArePreservedInOrder) {
  EXPECT_EQ(expanded("fluents: f. g. always: caused g. inertial f. caused f if g."),
            (std::vector<std::string>{"caused g.", "caused f if g.", "caused f if not -f after f."}));
}

TEST(Macros, NoConcurrencyIsLeftForGrounding) {
  const KProgram p = expand_macros(parse("fluents: f. actions: a. b. always: noConcurrency."));
  EXPECT_TRUE(p.no_concurrency);
  EXPECT_TRUE(p.always_rules.empty());
}
