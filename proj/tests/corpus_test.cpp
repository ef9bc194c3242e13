#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "kplan/corpus.hpp"
#include "kplan/error.hpp"
#include "support.hpp"

using namespace kplan;
namespace fs = std::filesystem;
using testing_support::corpus;
using testing_support::ground_file;

namespace {

fs::path write_temp(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("kplan_corpus_test_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(ParsePlan, Basic) {
  const GroundDomain g = ground_file("rocket.k");
  const Plan p = parse_plan(g, "PLAN 1:\nSTEP 1: {load(car,apollo), load(food,sojus)}\nSTEP 2: {}\n");
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].size(), 2u);
  EXPECT_TRUE(p[1].empty());
}

TEST(ParsePlan, SecondPlanIsIgnored) {
  const GroundDomain g = ground_file("yale.k");
  EXPECT_EQ(parse_plan(g, "STEP 1: {load}\n\nSTEP 1: {shoot}\n").size(), 1u);
}

TEST(ParsePlan, Errors) {
  const GroundDomain g = ground_file("yale.k");
  EXPECT_THROW(parse_plan(g, "STEP 2: {load}\n"), InputError);
  EXPECT_THROW(parse_plan(g, "STEP 1: {reload}\n"), InputError);
  EXPECT_THROW(parse_plan(g, "STEP 1: load\n"), InputError);
}

TEST(Fixture, LoadResolvesRelativePaths) {
  const Fixture f = load_fixture(corpus("fixtures/rocket-secure.json"));
  EXPECT_EQ(f.name, "rocket-secure");
  EXPECT_EQ(f.kind, FixtureKind::Secure);
  EXPECT_EQ(f.mode, Mode::Concurrent);
  EXPECT_TRUE(fs::exists(f.domain));
  EXPECT_EQ(f.count, 2u);
  EXPECT_EQ(f.contains.size(), 2u);
}

TEST(Fixture, MalformedManifests) {
  EXPECT_THROW(load_fixture(corpus("fixtures/does-not-exist.json")), InputError);
  EXPECT_THROW(load_fixture(write_temp("a.json", "{ not json")), InputError);
  EXPECT_THROW(load_fixture(write_temp("b.json", R"({"domain": "x.k", "expect": {}})")), InputError);
  EXPECT_THROW(load_fixture(write_temp("c.json", R"({"name": "c", "domain": "x.k", "kind": "odd", "expect": {}})")),
               InputError);
  EXPECT_THROW(load_fixture(write_temp("d.json", R"({"name": "d", "domain": "x.k", "mode": "fast", "expect": {}})")),
               InputError);
}

TEST(Fixture, MissingDomainIsReportedAsFailure) {
  const Fixture f = load_fixture(write_temp("e.json", R"({"name": "e", "domain": "nowhere.k", "expect": {}})"));
  const FixtureReport r = run_fixture(f);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.detail.find("nowhere.k"), std::string::npos);
}

TEST(Fixture, WrongExpectationFails) {
  Fixture f = load_fixture(corpus("fixtures/rocket-secure.json"));
  f.count = 3;
  const FixtureReport r = run_fixture(f);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.detail, "expected 3 plans, got 2");
}

TEST(Fixture, CoverageOfBundledDomains) {
  std::set<std::string> names;
  for (const auto& p : fixture_files(corpus("fixtures"))) names.insert(load_fixture(p).name);
  for (const char* required : {"sussman-optimistic", "bwi-secure", "bwi-short-insecure", "yale-insecure",
                               "monkey-secure", "monkey-incomplete-no-secure", "rocket-secure"}) {
    EXPECT_TRUE(names.count(required)) << required;
  }
  for (const char* base : {"bt", "btc", "btuc"}) {
    for (const char* enc : {"", "k"}) {
      for (int p = 1; p <= 3; ++p) {
        EXPECT_TRUE(names.count(std::string(base) + enc + "-p" + std::to_string(p))) << base << enc << p;
      }
    }
  }
  for (const char* base : {"bmtc", "bmtuc"}) {
    for (const char* enc : {"", "k"}) {
      for (int p = 1; p <= 3; ++p) {
        for (int t = 1; t <= 2; ++t) {
          EXPECT_TRUE(names.count(std::string(base) + enc + "-p" + std::to_string(p) + "-t" + std::to_string(t)));
        }
      }
    }
  }
}

TEST(Fixture, AllBundledFixturesPass) {
  for (const auto& p : fixture_files(corpus("fixtures"))) {
    const Fixture f = load_fixture(p);
    EXPECT_FALSE(f.source.empty()) << f.name;
    const FixtureReport r = run_fixture(f);
    EXPECT_TRUE(r.passed) << f.name << ": " << r.detail;
  }
}

TEST(Encodings, WorldAndKnowledgeAgree) {
  for (const char* base : {"bt", "btc", "btuc"}) {
    for (int p = 1; p <= 3; ++p) {
      const std::string bg = "background/packages-p" + std::to_string(p) + ".lp";
      const GroundDomain w = ground_file(std::string(base) + ".k", bg);
      const GroundDomain k = ground_file(std::string(base) + "k.k", bg);
      for (int len = 0; len <= 2 * p; ++len) {
        SearchOptions opts;
        opts.length = len;
        std::set<PlanSpec> ws, ks;
        for (const auto& plan : secure_plans(w, testing_support::goal_of(w, len), opts)) ws.insert(to_spec(w, plan));
        for (const auto& plan : secure_plans(k, testing_support::goal_of(k, len), opts)) ks.insert(to_spec(k, plan));
        EXPECT_EQ(ws, ks) << base << " p=" << p << " length " << len;
      }
    }
  }
}
