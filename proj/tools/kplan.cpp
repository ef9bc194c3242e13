// kplan: command-line driver for parsing, grounding, planning and security checking.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kplan/corpus.hpp"
#include "kplan/error.hpp"
#include "kplan/ground.hpp"
#include "kplan/parser.hpp"
#include "kplan/plan.hpp"
#include "kplan/reductions.hpp"
#include "kplan/safety.hpp"
#include "kplan/secure.hpp"

namespace {

using nlohmann::json;
using namespace kplan;

enum Exit { kFound = 0, kNone = 1, kInputError = 2, kResource = 3 };

struct SolveConfig {
  std::string domain;
  std::string background;
  bool secure = false;
  std::string check_plan;
  bool sequential = false;
  bool concurrent = false;
  std::size_t max_plans = 0;  // 0 = unlimited
  bool json = false;
  bool dump_ground = false;
  bool probe = false;
  int length = -1;
  std::size_t max_states = 1000000;
  std::size_t max_action_sets = 100000;
};

json state_json(const GroundDomain& g, const State& s) {
  json out = json::array();
  for (FLit l : s) out.push_back(g.literal_text(l));
  return out;
}

json plan_json(const GroundDomain& g, const Plan& p) {
  json out = json::array();
  for (const auto& step : to_spec(g, p)) out.push_back(step);
  return out;
}

json counterexample_json(const GroundDomain& g, const Counterexample& c) {
  json out;
  out["kind"] = to_string(c.kind);
  if (c.kind != Failure::NoInitialState) {
    out["initial_state"] = state_json(g, c.trajectory.initial);
    json steps = json::array();
    for (const auto& t : c.trajectory.steps) {
      steps.push_back({{"actions", plan_json(g, {t.actions})[0]}, {"state", state_json(g, t.to)}});
    }
    out["trajectory"] = steps;
  }
  return out;
}

std::string counterexample_text(const GroundDomain& g, const Counterexample& c, const Plan& plan) {
  std::ostringstream os;
  os << "counterexample: " << to_string(c.kind) << "\n";
  if (c.kind == Failure::NoInitialState) return os.str();
  os << "  initial state: " << state_text(g, c.trajectory.initial) << "\n";
  for (std::size_t k = 0; k < c.trajectory.steps.size(); ++k) {
    const auto& t = c.trajectory.steps[k];
    os << "  STEP " << k + 1 << ": " << actions_text(g, t.actions) << " -> " << state_text(g, t.to) << "\n";
  }
  if (c.kind == Failure::Stuck) {
    const std::size_t k = c.trajectory.steps.size();
    os << "  STEP " << k + 1 << ": " << actions_text(g, plan.at(k)) << " cannot be executed\n";
  }
  return os.str();
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Reports whether every transition reachable within `depth` steps is determined.
bool reachable_determined(const GroundDomain& g, int depth, const ActionSetOptions& aso, std::size_t max_states) {
  std::set<State> frontier;
  for (auto& s : legal_initial_states(g)) frontier.insert(std::move(s));
  std::set<State> seen = frontier;
  for (int d = 0; d < depth && !frontier.empty(); ++d) {
    std::set<State> next;
    for (const auto& s : frontier) {
      for (const auto& a : executable_action_sets(g, s, aso)) {
        const auto succ = successors(g, s, a);
        if (succ.size() > 1) return false;
        for (const auto& t : succ) {
          if (seen.insert(t).second) next.insert(t);
        }
      }
      if (seen.size() > max_states) throw ResourceError("state cap exceeded while probing determinism");
    }
    frontier = std::move(next);
  }
  return true;
}

int solve(const SolveConfig& cfg) {
  const KProgram program =
      load_program(cfg.domain, cfg.background.empty() ? std::nullopt : std::optional<std::filesystem::path>(cfg.background));
  const auto diagnostics = check_safety(program);
  if (!diagnostics.empty()) {
    for (const auto& d : diagnostics) std::cerr << "unsafe: " << d.statement << ": " << d.message << "\n";
    return kInputError;
  }
  const GroundDomain g = ground(program);
  if (cfg.dump_ground) {
    std::cout << dump(g);
    return kFound;
  }
  if (!g.goal) throw InputError("the problem has no goal section");
  CompiledGoal goal = *g.goal;
  if (cfg.length >= 0) goal.length = cfg.length;

  SearchOptions opts;
  opts.mode = cfg.concurrent ? Mode::Concurrent : Mode::Sequential;
  opts.length = goal.length;
  opts.max_states = cfg.max_states;
  opts.max_action_sets = cfg.max_action_sets;
  if (cfg.max_plans > 0) opts.limit = cfg.max_plans;
  SecureOptions sopts;
  sopts.max_states = cfg.max_states;

  if (cfg.probe) {
    ActionSetOptions aso;
    aso.bound = opts.mode == Mode::Sequential ? 1 : default_bound(g);
    aso.cap = cfg.max_action_sets;
    const bool plain = probe_plain(program);
    const bool determined = reachable_determined(g, goal.length, aso, cfg.max_states);
    const auto initial = legal_initial_states(g).size();
    if (cfg.json) {
      std::cout << json{{"plain", plain},
                        {"proper", plain ? json("yes (plain)") : json("unknown")},
                        {"determined_within_length", determined},
                        {"initial_states", initial}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "plain: " << (plain ? "yes" : "no") << "\n"
                << "proper: " << (plain ? "yes (plain)" : "unknown") << "\n"
                << "determined within " << goal.length << " steps: " << (determined ? "yes" : "no") << "\n"
                << "legal initial states: " << initial << "\n";
    }
    return kFound;
  }

  if (!cfg.check_plan.empty()) {
    const Plan plan = parse_plan(g, read_text(cfg.check_plan));
    if (static_cast<int>(plan.size()) != goal.length) {
      throw InputError("plan has " + std::to_string(plan.size()) + " step(s) but the query asks for " +
                       std::to_string(goal.length));
    }
    const SecurityVerdict v = check_secure(g, goal, plan, sopts);
    if (cfg.json) {
      json out{{"plans", json::array({plan_json(g, plan)})}, {"secure", v.secure}};
      if (v.counterexample) out["counterexample"] = counterexample_json(g, *v.counterexample);
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << (v.secure ? "SECURE" : "INSECURE") << "\n";
      if (v.counterexample) std::cout << counterexample_text(g, *v.counterexample, plan);
    }
    return v.secure ? kFound : kNone;
  }

  std::vector<Plan> plans;
  std::optional<std::pair<Plan, Counterexample>> rejected;
  if (cfg.secure) {
    SearchOptions inner = opts;
    inner.limit = std::numeric_limits<std::size_t>::max();
    optimistic_plans(g, goal, inner, [&](const PlanResult& r) {
      const SecurityVerdict v = check_secure(g, goal, r.plan, sopts);
      if (!v.secure) {
        if (!rejected) rejected.emplace(r.plan, *v.counterexample);
        return true;
      }
      plans.push_back(r.plan);
      return plans.size() < opts.limit;
    });
    if (plans.empty() && !rejected && legal_initial_states(g).empty()) {
      rejected.emplace(Plan{}, Counterexample{Failure::NoInitialState, {}});
    }
  } else {
    optimistic_plans(g, goal, opts, [&](const PlanResult& r) {
      plans.push_back(r.plan);
      return true;
    });
  }

  if (cfg.json) {
    json out{{"plans", json::array()}};
    for (const auto& p : plans) out["plans"].push_back(plan_json(g, p));
    if (cfg.secure) {
      out["secure"] = !plans.empty();
      if (plans.empty() && rejected) out["counterexample"] = counterexample_json(g, rejected->second);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < plans.size(); ++i) {
      if (i) std::cout << "\n";
      std::cout << "PLAN " << i + 1 << ":\n" << plan_text(g, plans[i]);
    }
    if (plans.empty()) {
      std::cout << (cfg.secure ? "no secure plan" : "no plan") << " of length " << goal.length << "\n";
      if (rejected) {
        std::cout << "rejected optimistic plan:\n"
                  << plan_text(g, rejected->first) << counterexample_text(g, rejected->second, rejected->first);
      }
    }
  }
  return plans.empty() ? kNone : kFound;
}

int run_fixtures(const std::vector<std::string>& paths) {
  std::vector<std::filesystem::path> files;
  for (const auto& p : paths) {
    if (std::filesystem::is_directory(p)) {
      for (auto& f : fixture_files(p)) files.push_back(f);
    } else {
      files.emplace_back(p);
    }
  }
  bool all = true;
  for (const auto& f : files) {
    const FixtureReport r = run_fixture(load_fixture(f));
    all = all && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed) std::cout << ": " << r.detail;
    std::cout << "\n";
  }
  return all ? kFound : kNone;
}

struct ReduceConfig {
  std::string construction;
  std::vector<std::string> inputs;
  bool normalize = false;
  std::string plan_out;
};

struct Generated {
  std::string problem;
  std::string plan;
};

Generated reduce(const ReduceConfig& cfg, const std::function<std::string(const std::string&)>& read) {
  const auto& c = cfg.construction;
  const std::size_t want = c == "dp" ? 2 : 1;
  if (cfg.inputs.size() != want) {
    throw InputError(c + " takes " + std::to_string(want) + " input file(s)");
  }
  Reduction r;
  if (c == "sat") {
    r = sat_to_optimistic(parse_dimacs(read(cfg.inputs[0])));
  } else if (c == "qbf2") {
    r = qbf2_to_security(parse_qdimacs(read(cfg.inputs[0])), cfg.normalize);
  } else if (c == "qbf2-conp") {
    r = qbf2_conp_variant(parse_dimacs(read(cfg.inputs[0])));
  } else if (c == "qbf3") {
    r = qbf3_to_secure_existence(parse_qdimacs(read(cfg.inputs[0])));
  } else if (c == "qbf3-neg") {
    r = qbf3_negated_variant(parse_qdimacs(read(cfg.inputs[0])));
  } else {
    r = dp_to_empty_secure(parse_dimacs(read(cfg.inputs[0])), parse_dimacs(read(cfg.inputs[1])));
  }
  return {r.problem, r.plan};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planner for the action language K"};
  app.require_subcommand(1);

  SolveConfig cfg;
  auto* solve_cmd = app.add_subcommand("solve", "Search for plans or check a plan");
  solve_cmd->add_option("file", cfg.domain, "K problem file")->required();
  solve_cmd->add_option("--background", cfg.background, "Separate background (Datalog) file");
  solve_cmd->add_flag("--secure", cfg.secure, "Report secure plans only");
  solve_cmd->add_option("--check-plan", cfg.check_plan, "Check the security of the plan in this file");
  auto* seq = solve_cmd->add_flag("--sequential", cfg.sequential, "At most one action per step (default)");
  auto* conc = solve_cmd->add_flag("--concurrent", cfg.concurrent, "Allow sets of concurrent actions");
  seq->excludes(conc);
  solve_cmd->add_option("--max-plans", cfg.max_plans, "Stop after N plans")->check(CLI::PositiveNumber);
  solve_cmd->add_flag("--json", cfg.json, "JSON output");
  solve_cmd->add_flag("--dump-ground", cfg.dump_ground, "Print the ground program and exit");
  solve_cmd->add_flag("--probe", cfg.probe, "Print plain/proper/determined diagnostics");
  solve_cmd->add_option("--length", cfg.length, "Override the plan length of the query")->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--max-states", cfg.max_states, "State cap for search and security checks")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-action-sets", cfg.max_action_sets, "Cap on candidate action sets per state")
      ->check(CLI::PositiveNumber);

  std::vector<std::string> fixture_paths;
  auto* fixture_cmd = app.add_subcommand("fixture", "Run fixture manifests (files or directories)");
  fixture_cmd->add_option("paths", fixture_paths)->required();

  ReduceConfig rcfg;
  auto* reduce_cmd = app.add_subcommand("reduce", "Generate a K problem from a CNF/QBF instance");
  reduce_cmd->add_option("construction", rcfg.construction,
                         "sat | qbf2 | qbf2-conp | qbf3 | qbf3-neg | dp")
      ->required()
      ->check(CLI::IsMember({"sat", "qbf2", "qbf2-conp", "qbf3", "qbf3-neg", "dp"}));
  reduce_cmd->add_option("input", rcfg.inputs, "DIMACS / QDIMACS file(s); dp takes two")->required();
  reduce_cmd->add_flag("--normalize", rcfg.normalize, "Rename polarities so that all-true satisfies the matrix");
  reduce_cmd->add_option("--plan-out", rcfg.plan_out, "Write the construction's candidate plan to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*solve_cmd) return solve(cfg);
    if (*fixture_cmd) return run_fixtures(fixture_paths);
    if (*reduce_cmd) {
      const Generated out = reduce(rcfg, [](const std::string& p) { return read_text(p); });
      std::cout << out.problem;
      if (!rcfg.plan_out.empty()) {
        if (out.plan.empty()) throw InputError(rcfg.construction + " fixes no candidate plan");
        std::ofstream f(rcfg.plan_out);
        if (!(f << out.plan)) throw InputError("cannot write " + rcfg.plan_out);
      }
      return kFound;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  }
  return kInputError;
}
