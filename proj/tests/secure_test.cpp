#include <gtest/gtest.h>

#include <random>

#include "kplan/corpus.hpp"
#include "kplan/error.hpp"
#include "kplan/parser.hpp"
#include "kplan/secure.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace kplan;
using testing_support::goal_of;
using testing_support::ground_file;
using testing_support::ground_text;

namespace {

std::vector<oracle::LitSet> as_names(const GroundDomain& g, const Plan& p) {
  std::vector<oracle::LitSet> out;
  for (const auto& a : p) out.push_back(oracle::to_names(g, a));
  return out;
}

}  // namespace

TEST(Secure, YaleShootIsStuck) {
  const GroundDomain g = ground_file("yale.k");
  const SecurityVerdict v = check_secure(g, goal_of(g), to_plan(g, {{"shoot"}}));
  EXPECT_FALSE(v.secure);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->kind, Failure::Stuck);
  EXPECT_EQ(to_string(v.counterexample->kind), "STUCK");
  EXPECT_EQ(oracle::to_lits(g, v.counterexample->trajectory.initial), (oracle::LitSet{"-loaded", "alive"}));
  EXPECT_TRUE(v.counterexample->trajectory.steps.empty());
}

TEST(Secure, IncompleteBlocksWorld) {
  const GroundDomain g = ground_file("bw-incomplete.k");
  const Plan four = to_plan(g, {{"move(d,table)"}, {"move(d,b)"}, {"move(c,d)"}, {"move(a,c)"}});
  EXPECT_TRUE(check_secure(g, goal_of(g), four).secure);
  const SecurityVerdict v = check_secure(g, goal_of(g, 2), to_plan(g, {{"move(c,d)"}, {"move(a,c)"}}));
  EXPECT_FALSE(v.secure);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->kind, Failure::GoalMissed);
  EXPECT_TRUE(contains(v.counterexample->trajectory.initial, *g.find_literal({{"on", {"d", "table"}}, false})));
  EXPECT_TRUE(is_trajectory(g, v.counterexample->trajectory));
  EXPECT_FALSE(goal_satisfied(goal_of(g, 2), v.counterexample->trajectory.last()));
}

TEST(Secure, ConcurrentDunking) {
  for (int p = 1; p <= 3; ++p) {
    const GroundDomain g = ground_file("bt.k", "background/packages-p" + std::to_string(p) + ".lp");
    ActionSet all;
    for (int a = 0; a < g.action_count(); ++a) all.push_back(a);
    EXPECT_TRUE(check_secure(g, goal_of(g, 1), {all}).secure) << p;
    if (p > 1) EXPECT_FALSE(check_secure(g, goal_of(g, 1), {{0}}).secure) << p;
  }
}

TEST(Secure, NoInitialState) {
  const GroundDomain g = ground_text("fluents: f. initially: caused f. caused -f. goal: ? (0)");
  const SecurityVerdict v = check_secure(g, goal_of(g), {});
  EXPECT_FALSE(v.secure);
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->kind, Failure::NoInitialState);
}

TEST(Secure, NoSuccessorIsStuck) {
  const GroundDomain g = ground_text("fluents: f. actions: a. always: executable a. caused false after a. goal: ? (1)");
  const SecurityVerdict v = check_secure(g, goal_of(g), {{0}});
  ASSERT_TRUE(v.counterexample);
  EXPECT_EQ(v.counterexample->kind, Failure::Stuck);
}

TEST(Secure, StateCap) {
  const GroundDomain g = ground_file("btuc.k", "background/packages-p3.lp");
  SecureOptions opts;
  opts.max_states = 1;
  EXPECT_THROW(check_secure(g, goal_of(g, 5), to_plan(g, {{"dunk(1)"}, {"flush"}, {"dunk(2)"}, {"flush"}, {"dunk(3)"}}),
                            opts),
               ResourceError);
}

TEST(SecurePlans, RocketHasTwo) {
  const GroundDomain g = ground_file("rocket.k");
  SearchOptions opts;
  opts.mode = Mode::Concurrent;
  EXPECT_EQ(secure_plans(g, goal_of(g), opts).size(), 2u);
}

TEST(SecurePlans, MonkeyListing) {
  const GroundDomain g = ground_file("monkey.k");
  const auto plans = secure_plans(g, goal_of(g), {});
  ASSERT_EQ(plans.size(), 1u);
  EXPECT_EQ(to_spec(g, plans[0]), (PlanSpec{{"walk(2)"}, {"pushBox(3)"}, {"climbBox"}, {"graspBanana"}}));
}

TEST(SecurePlans, BombMinimalLengths) {
  for (int p = 1; p <= 3; ++p) {
    const GroundDomain g = ground_file("btc.k", "background/packages-p" + std::to_string(p) + ".lp");
    EXPECT_FALSE(secure_plans(g, goal_of(g, 2 * p - 1), {}).empty()) << p;
    if (p > 1) EXPECT_TRUE(secure_plans(g, goal_of(g, 2 * p - 2), {}).empty()) << p;
  }
}

TEST(SecurePlans, SubsetOfOptimisticAndMatchesBruteForce) {
  std::mt19937 rng(5);
  for (int i = 0; i < 80; ++i) {
    oracle::RandomOptions ro;
    ro.max_fluents = 3;
    ro.max_actions = 3;
    const std::string text = oracle::random_domain(rng, ro) + "goal: -f0 ? (" + std::to_string(i % 3) + ")\n";
    const KProgram p = parse(text);
    const GroundDomain g = ground(p);
    const oracle::Domain d = oracle::from_program(p);
    const CompiledGoal q = goal_of(g);
    const oracle::Goal og{oracle::to_lits(g, q.pos), oracle::to_lits(g, q.neg)};
    for (Mode mode : {Mode::Sequential, Mode::Concurrent}) {
      SearchOptions opts;
      opts.mode = mode;
      std::set<Plan> optimistic;
      for (const auto& r : optimistic_plans(g, q, opts)) optimistic.insert(r.plan);
      std::set<std::vector<oracle::LitSet>> got, want;
      for (const auto& plan : secure_plans(g, q, opts)) {
        EXPECT_TRUE(optimistic.count(plan)) << text;
        got.insert(as_names(g, plan));
      }
      for (const auto& plan : oracle::all_plans(d, q.length, mode == Mode::Sequential ? 1 : -1)) {
        if (oracle::optimistic(d, plan, og) && oracle::secure(d, plan, og)) want.insert(plan);
      }
      EXPECT_EQ(got, want) << text;
    }
  }
}
