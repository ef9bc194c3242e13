#include "kplan/reductions.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "kplan/error.hpp"

namespace kplan {

namespace {

std::vector<int> tokens_until_zero(std::istringstream& in, bool& terminated) {
  std::vector<int> out;
  int v;
  terminated = false;
  while (in >> v) {
    if (v == 0) {
      terminated = true;
      break;
    }
    out.push_back(v);
  }
  return out;
}

/// Shared reader for DIMACS and QDIMACS; quantifier lines are collected in `prefix`.
CNF read_clauses(const std::string& text, std::vector<std::pair<Quantifier, std::vector<int>>>* prefix) {
  CNF f;
  bool header = false;
  std::istringstream lines(text);
  std::string line;
  std::vector<int> pending;
  while (std::getline(lines, line)) {
    std::istringstream in(line);
    std::string first;
    if (!(in >> first) || first == "c" || first[0] == '%') continue;
    if (first == "p") {
      std::string fmt;
      int clauses = 0;
      if (!(in >> fmt >> f.num_vars >> clauses) || fmt != "cnf" || f.num_vars < 0) {
        throw InputError("malformed DIMACS header: " + line);
      }
      header = true;
      continue;
    }
    if (!header) throw InputError("DIMACS input lacks a 'p cnf' header");
    if (first == "a" || first == "e") {
      if (!prefix) throw InputError("quantifier line in plain DIMACS input");
      bool done;
      auto vars = tokens_until_zero(in, done);
      if (!done) throw InputError("quantifier line not terminated by 0: " + line);
      prefix->push_back({first == "a" ? Quantifier::Forall : Quantifier::Exists, std::move(vars)});
      continue;
    }
    std::istringstream all(line);
    int v;
    while (all >> v) {
      if (v == 0) {
        f.clauses.push_back(pending);
        pending.clear();
      } else {
        if (std::abs(v) > f.num_vars) throw InputError("variable " + std::to_string(v) + " exceeds header count");
        pending.push_back(v);
      }
    }
    if (!all.eof()) throw InputError("malformed clause line: " + line);
  }
  if (!header) throw InputError("DIMACS input lacks a 'p cnf' header");
  if (!pending.empty()) f.clauses.push_back(pending);
  return f;
}

std::set<int> matrix_vars(const CNF& f) {
  std::set<int> out;
  for (const auto& c : f.clauses) {
    for (int l : c) out.insert(std::abs(l));
  }
  return out;
}

/// Merges adjacent blocks with equal quantifiers and maps them onto `pattern`, in order.
/// Matrix variables bound nowhere are added to the last existential block of the pattern.
std::vector<std::vector<int>> fit_blocks(const QBF& q, const std::vector<Quantifier>& pattern) {
  std::vector<std::pair<Quantifier, std::vector<int>>> merged;
  for (const auto& [quant, vars] : q.prefix) {
    if (vars.empty()) continue;
    if (!merged.empty() && merged.back().first == quant) {
      merged.back().second.insert(merged.back().second.end(), vars.begin(), vars.end());
    } else {
      merged.push_back({quant, vars});
    }
  }
  std::vector<std::vector<int>> out(pattern.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < pattern.size() && j < merged.size(); ++i) {
    if (merged[j].first == pattern[i]) out[i] = merged[j++].second;
  }
  if (j < merged.size()) throw InputError("quantifier prefix does not fit the construction");
  std::set<int> bound;
  for (const auto& b : out) bound.insert(b.begin(), b.end());
  for (int v : matrix_vars(q.matrix)) {
    if (!bound.count(v)) out.back().push_back(v);
  }
  for (auto& b : out) std::sort(b.begin(), b.end());
  return out;
}

void check_cap(int n) {
  if (n > kOracleVariableCap) {
    throw ResourceError("oracle limited to " + std::to_string(kOracleVariableCap) + " variables, got " +
                        std::to_string(n));
  }
}

/// Some model of f, if any.
std::optional<std::vector<bool>> find_model(const CNF& f) {
  check_cap(f.num_vars);
  std::vector<bool> a(f.num_vars + 1, false);
  for (std::uint32_t bits = 0; bits < (1u << f.num_vars); ++bits) {
    for (int v = 1; v <= f.num_vars; ++v) a[v] = (bits >> (v - 1)) & 1u;
    if (satisfies(f, a)) return a;
  }
  return std::nullopt;
}

class Writer {
 public:
  void fluent(const std::string& f) { fluents_ += "  " + f + ".\n"; }
  void action(const std::string& a) { actions_ += "  " + a + ".\n"; }
  void always(const std::string& s) { always_ += "  " + s + "\n"; }
  void initially(const std::string& s) { initially_ += "  " + s + "\n"; }
  void goal(const std::string& g) { goal_ = g; }

  std::string text(const std::string& comment) const {
    std::string out = "% " + comment + "\n\nfluents:\n" + fluents_;
    if (!actions_.empty()) out += "\nactions:\n" + actions_;
    if (!always_.empty()) out += "\nalways:\n" + always_;
    if (!initially_.empty()) out += "\ninitially:\n" + initially_;
    return out + "\ngoal:\n  " + goal_ + "\n";
  }

 private:
  std::string fluents_, actions_, always_, initially_, goal_;
};

/// Names variables by block: prefix letter followed by the DIMACS number.
class Names {
 public:
  void assign(const std::vector<int>& vars, char letter) {
    for (int v : vars) names_[v] = letter + std::to_string(v);
  }
  const std::string& name(int v) const { return names_.at(v); }
  std::string lit(int l) const { return (l < 0 ? "-" : "") + name(std::abs(l)); }
  std::string negated(int l) const { return lit(-l); }

 private:
  std::map<int, std::string> names_;
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& i : items) out += (out.empty() ? "" : ", ") + i;
  return out;
}

/// Literals of clause `c` whose variable is in `block`, each complemented.
std::vector<std::string> complemented(const std::vector<int>& c, const std::set<int>& block, const Names& n) {
  std::vector<std::string> out;
  for (int l : c) {
    if (block.count(std::abs(l))) out.push_back(n.negated(l));
  }
  return out;
}

std::string forbidden(const std::vector<std::string>& post, const std::vector<std::string>& pre) {
  if (post.empty() && pre.empty()) return "caused false.";
  std::string s = "forbidden";
  if (!post.empty()) s += " " + join(post);
  if (!pre.empty()) s += " after " + join(pre);
  return s + ".";
}

std::string caused(const std::string& head, const std::vector<std::string>& post, const std::vector<std::string>& pre) {
  std::string s = "caused " + head;
  if (!post.empty()) s += " if " + join(post);
  if (!pre.empty()) s += " after " + join(pre);
  return s + ".";
}

}  // namespace

CNF parse_dimacs(const std::string& text) { return read_clauses(text, nullptr); }

QBF parse_qdimacs(const std::string& text) {
  QBF q;
  q.matrix = read_clauses(text, &q.prefix);
  return q;
}

bool satisfies(const CNF& f, const std::vector<bool>& a) {
  for (const auto& c : f.clauses) {
    const bool sat = std::any_of(c.begin(), c.end(), [&](int l) { return a.at(std::abs(l)) == (l > 0); });
    if (!sat) return false;
  }
  return true;
}

bool oracle_sat(const CNF& f) { return find_model(f).has_value(); }

bool oracle_qbf(const QBF& q) {
  check_cap(q.matrix.num_vars);
  std::vector<std::pair<Quantifier, int>> order;
  std::set<int> bound;
  for (const auto& [quant, vars] : q.prefix) {
    for (int v : vars) {
      if (bound.insert(v).second) order.push_back({quant, v});
    }
  }
  for (int v : matrix_vars(q.matrix)) {
    if (!bound.count(v)) order.push_back({Quantifier::Exists, v});
  }
  std::vector<bool> a(q.matrix.num_vars + 1, false);
  std::function<bool(std::size_t)> eval = [&](std::size_t i) {
    if (i == order.size()) return satisfies(q.matrix, a);
    const auto [quant, v] = order[i];
    for (bool value : {false, true}) {
      a[v] = value;
      const bool r = eval(i + 1);
      if (quant == Quantifier::Exists && r) return true;
      if (quant == Quantifier::Forall && !r) return false;
    }
    return quant == Quantifier::Forall;
  };
  return eval(0);
}

std::pair<std::vector<int>, std::vector<int>> blocks_ae(const QBF& q) {
  auto b = fit_blocks(q, {Quantifier::Forall, Quantifier::Exists});
  return {b[0], b[1]};
}

std::vector<std::vector<int>> blocks_eae(const QBF& q) {
  return fit_blocks(q, {Quantifier::Exists, Quantifier::Forall, Quantifier::Exists});
}

Reduction sat_to_optimistic(const CNF& f) {
  std::vector<int> vars;
  for (int v = 1; v <= f.num_vars; ++v) vars.push_back(v);
  Names n;
  n.assign(vars, 'x');
  const std::set<int> all(vars.begin(), vars.end());
  Writer w;
  for (int v : vars) w.fluent(n.name(v));
  w.fluent("zero");
  for (int v : vars) w.initially("total " + n.name(v) + ".");
  for (const auto& c : f.clauses) w.initially(forbidden(complemented(c, all, n), {}));
  w.initially("caused zero.");
  w.goal("zero ? (0)");
  return {w.text("Satisfiability: a plan of length 0 exists iff the CNF has a model."), ""};
}

Reduction qbf2_to_security(const QBF& input, bool normalize) {
  QBF q = input;
  const auto [X, Y] = blocks_ae(q);
  std::vector<bool> all_true(q.matrix.num_vars + 1, true);
  if (!satisfies(q.matrix, all_true)) {
    if (!normalize) throw InputError("the matrix is not satisfied by setting every variable to true");
    if (auto model = find_model(q.matrix)) {
      for (auto& c : q.matrix.clauses) {
        for (int& l : c) {
          if (!(*model)[std::abs(l)]) l = -l;
        }
      }
    }
  }
  Names n;
  n.assign(X, 'x');
  n.assign(Y, 'y');
  const std::set<int> xs(X.begin(), X.end()), ys(Y.begin(), Y.end());
  Writer w;
  for (int v : X) w.fluent(n.name(v));
  for (int v : Y) w.fluent(n.name(v));
  w.fluent("zero");
  w.fluent("one");
  w.action("alpha");
  for (int v : Y) w.always("total " + n.name(v) + " after zero.");
  for (const auto& c : q.matrix.clauses) {
    std::vector<std::string> pre{"zero"};
    for (const auto& l : complemented(c, xs, n)) pre.push_back(l);
    w.always(forbidden(complemented(c, ys, n), pre));
  }
  w.always("caused one after zero.");
  w.always("executable alpha.");
  for (int v : X) w.initially("total " + n.name(v) + ".");
  w.initially("caused zero.");
  w.goal("one ? (1)");
  return {w.text("Forall X Exists Y: the plan <{alpha}> is secure iff the QBF is true."), "STEP 1: {alpha}\n"};
}

Reduction qbf2_conp_variant(const CNF& f) {
  std::vector<int> X;
  for (int v = 1; v <= f.num_vars; ++v) X.push_back(v);
  Names n;
  n.assign(X, 'x');
  const std::set<int> xs(X.begin(), X.end());
  Writer w;
  for (int v : X) w.fluent(n.name(v));
  w.fluent("zero");
  w.fluent("one");
  w.action("alpha");
  for (const auto& c : f.clauses) {
    std::vector<std::string> pre{"zero"};
    for (const auto& l : complemented(c, xs, n)) pre.push_back(l);
    w.always(caused("one", {}, pre));
  }
  w.always("executable alpha.");
  w.always("caused false after not alpha.");
  for (int v : X) w.initially("total " + n.name(v) + ".");
  w.initially("caused zero.");
  w.goal("one ? (1)");
  return {w.text("The plan <{alpha}> is secure iff the CNF over X is unsatisfiable."), "STEP 1: {alpha}\n"};
}

Reduction qbf3_to_secure_existence(const QBF& q) {
  const auto b = blocks_eae(q);
  const auto &Z = b[0], &X = b[1], &Y = b[2];
  Names n;
  n.assign(Z, 'z');
  n.assign(X, 'x');
  n.assign(Y, 'y');
  std::set<int> xs(X.begin(), X.end()), yz(Y.begin(), Y.end());
  yz.insert(Z.begin(), Z.end());
  Writer w;
  for (const auto* block : {&Z, &X, &Y}) {
    for (int v : *block) w.fluent(n.name(v));
  }
  w.fluent("zero");
  w.fluent("one");
  for (int v : Z) w.action("set_" + n.name(v));
  for (int v : Z) {
    w.always(caused(n.name(v), {}, {"zero", "set_" + n.name(v)}));
    w.always(caused("-" + n.name(v), {}, {"zero", "not set_" + n.name(v)}));
    w.always("executable set_" + n.name(v) + ".");
  }
  w.always("caused one after zero.");
  for (int v : Y) w.always("total " + n.name(v) + " after zero.");
  for (const auto& c : q.matrix.clauses) {
    std::vector<std::string> pre{"zero"};
    for (const auto& l : complemented(c, xs, n)) pre.push_back(l);
    w.always(forbidden(complemented(c, yz, n), pre));
  }
  for (int v : X) w.initially("total " + n.name(v) + ".");
  w.initially("caused zero.");
  w.goal("one ? (1)");
  return {w.text("Exists Z Forall X Exists Y: a secure plan of length 1 exists iff the QBF is true."), ""};
}

Reduction qbf3_negated_variant(const QBF& q) {
  const auto b = blocks_eae(q);
  if (!b[2].empty()) throw InputError("the negated variant takes no innermost existential block");
  const auto &Z = b[0], &X = b[1];
  Names n;
  n.assign(Z, 'z');
  n.assign(X, 'x');
  const std::set<int> xs(X.begin(), X.end()), zs(Z.begin(), Z.end());
  Writer w;
  for (const auto* block : {&Z, &X}) {
    for (int v : *block) w.fluent(n.name(v));
  }
  w.fluent("zero");
  w.fluent("one");
  for (int v : Z) w.action("set_" + n.name(v));
  for (int v : Z) {
    w.always(caused(n.name(v), {}, {"zero", "set_" + n.name(v)}));
    w.always(caused("-" + n.name(v), {}, {"zero", "not set_" + n.name(v)}));
    w.always("executable set_" + n.name(v) + ".");
  }
  for (const auto& c : q.matrix.clauses) {
    std::vector<std::string> pre{"zero"};
    for (const auto& l : complemented(c, xs, n)) pre.push_back(l);
    w.always(caused("one", complemented(c, zs, n), pre));
  }
  for (int v : X) w.initially("total " + n.name(v) + ".");
  w.initially("caused zero.");
  w.goal("one ? (1)");
  return {w.text("Exists Z Forall X: a secure plan of length 1 exists iff the matrix is false for some Z and every X."),
          ""};
}

Reduction dp_to_empty_secure(const CNF& phi, const CNF& psi) {
  std::vector<int> X, Y;
  for (int v = 1; v <= phi.num_vars; ++v) X.push_back(v);
  for (int v = 1; v <= psi.num_vars; ++v) Y.push_back(v);
  Names nx, ny;
  nx.assign(X, 'x');
  ny.assign(Y, 'y');
  Writer w;
  for (int v : X) w.fluent(nx.name(v));
  for (int v : Y) w.fluent(ny.name(v));
  w.fluent("f");
  for (int v : X) w.initially("total " + nx.name(v) + ".");
  for (const auto& c : phi.clauses) {
    if (c.empty()) {
      w.initially("caused false.");
      continue;
    }
    std::vector<std::string> rest;
    for (std::size_t i = 1; i < c.size(); ++i) rest.push_back(nx.negated(c[i]));
    w.initially(caused(nx.lit(c[0]), rest, {}));
  }
  for (int v : Y) w.initially("total " + ny.name(v) + ".");
  for (const auto& c : psi.clauses) {
    std::vector<std::string> body;
    for (int l : c) body.push_back(ny.negated(l));
    w.initially(caused("f", body, {}));
  }
  w.goal("f ? (0)");
  return {w.text("The empty plan is secure iff phi is satisfiable and psi is not."), ""};
}

CNF random_cnf(std::mt19937& rng, int num_vars, int num_clauses, int max_clause_len) {
  CNF f;
  f.num_vars = num_vars;
  if (num_vars == 0) return f;
  std::uniform_int_distribution<int> len(1, max_clause_len), var(1, num_vars), sign(0, 1);
  for (int i = 0; i < num_clauses; ++i) {
    std::vector<int> c;
    const int k = len(rng);
    for (int j = 0; j < k; ++j) c.push_back(sign(rng) ? var(rng) : -var(rng));
    f.clauses.push_back(std::move(c));
  }
  return f;
}

}  // namespace kplan
