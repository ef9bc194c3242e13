#pragma once

// Golden fixtures over the bundled example domains.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kplan/plan.hpp"
#include "kplan/secure.hpp"

namespace kplan {

/// Reads a K file and an optional separate background file.
KProgram load_program(const std::filesystem::path& domain, const std::optional<std::filesystem::path>& background = {});

/// Parses plan text made of "STEP k: {a1, a2}" lines. Other lines are ignored;
/// a second "STEP 1" line ends the plan.
Plan parse_plan(const GroundDomain& g, const std::string& text);

/// Plans written as lists of action-set texts, e.g. {{"move(c,table)"}, {"move(b,a)"}}.
using PlanSpec = std::vector<std::vector<std::string>>;

Plan to_plan(const GroundDomain& g, const PlanSpec& spec);
PlanSpec to_spec(const GroundDomain& g, const Plan& p);

enum class FixtureKind { Optimistic, Secure, Check };

struct Fixture {
  std::string name;
  std::string source;  // where the expected value comes from: literature-listing, hand-derived, trivial
  std::filesystem::path domain;
  std::optional<std::filesystem::path> background;
  std::optional<int> length;
  Mode mode = Mode::Sequential;
  FixtureKind kind = FixtureKind::Optimistic;
  PlanSpec plan;  // for Check

  // Expectations; any subset may be present.
  std::optional<std::vector<PlanSpec>> plans;     // exact set
  std::vector<PlanSpec> contains;                 // members
  std::vector<PlanSpec> excludes;                 // non-members
  std::optional<std::size_t> count;
  std::optional<bool> exists;
  std::optional<std::size_t> initial_states;
  std::optional<bool> secure;                     // for Check
  std::optional<std::string> failure;             // STUCK, GOAL_MISSED, NO_INITIAL_STATE
  std::vector<std::string> counterexample_initial;  // literals of the counterexample's initial state
};

/// Loads a fixture manifest; relative paths are resolved against its directory.
/// Throws InputError on malformed manifests.
Fixture load_fixture(const std::filesystem::path& manifest);

struct FixtureReport {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

FixtureReport run_fixture(const Fixture& f);

/// All *.json manifests in a directory, sorted by file name.
std::vector<std::filesystem::path> fixture_files(const std::filesystem::path& dir);

}  // namespace kplan
