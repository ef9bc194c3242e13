#include "kplan/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kplan/error.hpp"
#include "kplan/parser.hpp"

namespace kplan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int action_id(const GroundDomain& g, const std::string& text) {
  const Literal l = parse_literal(text);
  GroundAtom a;
  a.pred = l.atom.pred;
  for (const auto& t : l.atom.args) a.args.push_back(t.name);
  const auto id = g.find_action(a);
  if (!id) throw InputError("'" + text + "' is not a legal action instance");
  return *id;
}

}  // namespace

KProgram load_program(const fs::path& domain, const std::optional<fs::path>& background) {
  const std::string text = read_file(domain);
  return parse(text, background ? read_file(*background) : std::string{});
}

Plan parse_plan(const GroundDomain& g, const std::string& text) {
  Plan plan;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line.compare(start, 5, "STEP ") != 0) continue;
    const auto colon = line.find(':', start);
    const auto open = line.find('{', start);
    const auto close = line.rfind('}');
    if (colon == std::string::npos || open == std::string::npos || close == std::string::npos || close < open) {
      throw InputError("malformed plan line: " + line);
    }
    const int step = std::stoi(line.substr(start + 5, colon - start - 5));
    if (step == 1 && !plan.empty()) break;
    if (step != static_cast<int>(plan.size()) + 1) throw InputError("plan steps out of order: " + line);
    // Split on commas at parenthesis depth 0.
    ActionSet a;
    const std::string body = line.substr(open + 1, close - open - 1);
    std::string item;
    int depth = 0;
    auto flush = [&] {
      const auto b = item.find_first_not_of(" \t");
      if (b != std::string::npos) a.push_back(action_id(g, item.substr(b)));
      item.clear();
    };
    for (char c : body) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        flush();
      } else {
        item += c;
      }
    }
    flush();
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    plan.push_back(std::move(a));
  }
  return plan;
}

Plan to_plan(const GroundDomain& g, const PlanSpec& spec) {
  Plan p;
  for (const auto& step : spec) {
    ActionSet a;
    for (const auto& t : step) a.push_back(action_id(g, t));
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    p.push_back(std::move(a));
  }
  return p;
}

PlanSpec to_spec(const GroundDomain& g, const Plan& p) {
  PlanSpec out;
  for (const auto& a : p) {
    std::vector<std::string> step;
    for (int x : a) step.push_back(g.action_text(x));
    out.push_back(std::move(step));
  }
  return out;
}

Fixture load_fixture(const fs::path& manifest) {
  json j;
  try {
    j = json::parse(read_file(manifest));
  } catch (const json::exception& e) {
    throw InputError(manifest.string() + ": " + e.what());
  }
  const fs::path dir = manifest.parent_path();
  Fixture f;
  try {
    f.name = j.at("name").get<std::string>();
    f.source = j.value("source", "");
    f.domain = dir / j.at("domain").get<std::string>();
    if (j.contains("background")) f.background = dir / j["background"].get<std::string>();
    if (j.contains("length")) f.length = j["length"].get<int>();
    const std::string mode = j.value("mode", "sequential");
    if (mode != "sequential" && mode != "concurrent") throw InputError("unknown mode '" + mode + "'");
    f.mode = mode == "sequential" ? Mode::Sequential : Mode::Concurrent;
    const std::string kind = j.value("kind", "optimistic");
    if (kind == "optimistic") {
      f.kind = FixtureKind::Optimistic;
    } else if (kind == "secure") {
      f.kind = FixtureKind::Secure;
    } else if (kind == "check") {
      f.kind = FixtureKind::Check;
      f.plan = j.at("plan").get<PlanSpec>();
    } else {
      throw InputError("unknown fixture kind '" + kind + "'");
    }
    const json& e = j.at("expect");
    if (e.contains("plans")) f.plans = e["plans"].get<std::vector<PlanSpec>>();
    if (e.contains("contains")) f.contains = e["contains"].get<std::vector<PlanSpec>>();
    if (e.contains("excludes")) f.excludes = e["excludes"].get<std::vector<PlanSpec>>();
    if (e.contains("count")) f.count = e["count"].get<std::size_t>();
    if (e.contains("exists")) f.exists = e["exists"].get<bool>();
    if (e.contains("initial_states")) f.initial_states = e["initial_states"].get<std::size_t>();
    if (e.contains("secure")) f.secure = e["secure"].get<bool>();
    if (e.contains("failure")) f.failure = e["failure"].get<std::string>();
    if (e.contains("counterexample_initial")) {
      f.counterexample_initial = e["counterexample_initial"].get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw InputError(manifest.string() + ": " + e.what());
  }
  return f;
}

namespace {

std::string spec_text(const PlanSpec& p) {
  std::string out = "<";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += "{";
    for (std::size_t k = 0; k < p[i].size(); ++k) out += (k ? ", " : "") + p[i][k];
    out += "}";
  }
  return out + ">";
}

std::string evaluate_fixture(const Fixture& f) {
  const KProgram program = load_program(f.domain, f.background);
  const GroundDomain g = ground(program);
  if (!g.goal) return "domain has no goal";
  CompiledGoal goal = *g.goal;
  if (f.length) goal.length = *f.length;

  if (f.initial_states) {
    const auto n = legal_initial_states(g).size();
    if (n != *f.initial_states) {
      return "expected " + std::to_string(*f.initial_states) + " initial states, got " + std::to_string(n);
    }
  }

  if (f.kind == FixtureKind::Check) {
    const Plan plan = to_plan(g, f.plan);
    const SecurityVerdict v = check_secure(g, goal, plan);
    if (f.secure && v.secure != *f.secure) return std::string("expected ") + (*f.secure ? "secure" : "insecure");
    if (f.failure) {
      if (!v.counterexample || to_string(v.counterexample->kind) != *f.failure) return "expected failure " + *f.failure;
    }
    for (const auto& text : f.counterexample_initial) {
      const Literal l = parse_literal(text);
      const auto lit = g.find_literal(ground_literal(l));
      if (!v.counterexample || !lit || !contains(v.counterexample->trajectory.initial, *lit)) {
        return "counterexample initial state lacks " + text;
      }
    }
    return "";
  }

  SearchOptions opts;
  opts.mode = f.mode;
  opts.length = goal.length;
  std::vector<Plan> found;
  if (f.kind == FixtureKind::Optimistic) {
    for (const auto& r : optimistic_plans(g, goal, opts)) {
      if (!is_trajectory(g, r.witness) || !goal_satisfied(goal, r.witness.last())) {
        return "witness trajectory does not re-validate for " + spec_text(to_spec(g, r.plan));
      }
      found.push_back(r.plan);
    }
  } else {
    found = secure_plans(g, goal, opts);
  }
  const std::set<Plan> got(found.begin(), found.end());
  if (f.plans) {
    std::set<Plan> want;
    for (const auto& p : *f.plans) want.insert(to_plan(g, p));
    if (want != got) {
      std::string detail = "plan set differs; got " + std::to_string(got.size()) + ":";
      for (const auto& p : got) detail += " " + spec_text(to_spec(g, p));
      return detail;
    }
  }
  for (const auto& p : f.contains) {
    if (!got.count(to_plan(g, p))) return "missing plan " + spec_text(p);
  }
  for (const auto& p : f.excludes) {
    if (got.count(to_plan(g, p))) return "unexpected plan " + spec_text(p);
  }
  if (f.count && got.size() != *f.count) {
    return "expected " + std::to_string(*f.count) + " plans, got " + std::to_string(got.size());
  }
  if (f.exists && got.empty() == *f.exists) {
    return *f.exists ? "expected a plan, found none" : "expected no plan, found " + std::to_string(got.size());
  }
  return "";
}

}  // namespace

FixtureReport run_fixture(const Fixture& f) {
  FixtureReport r;
  r.name = f.name;
  const auto start = std::chrono::steady_clock::now();
  try {
    r.detail = evaluate_fixture(f);
    r.passed = r.detail.empty();
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<fs::path> fixture_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kplan
