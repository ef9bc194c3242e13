#include "kplan/datalog.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "kplan/error.hpp"
#include "kplan/safety.hpp"

namespace kplan {

std::string to_string(const GroundAtom& a) {
  std::string out = a.pred;
  if (!a.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ',';
      out += a.args[i];
    }
    out += ')';
  }
  return out;
}

std::string to_string(const GroundLiteral& l) { return (l.negated ? "-" : "") + to_string(l.atom); }

GroundLiteral ground_literal(const Literal& l) {
  GroundLiteral g;
  g.atom.pred = l.atom.pred;
  g.negated = l.negated;
  for (const auto& t : l.atom.args) {
    if (t.is_var) throw InputError("literal '" + to_string(l) + "' is not ground");
    g.atom.args.push_back(t.name);
  }
  return g;
}

std::string predicate_key(const Literal& l) {
  return (l.negated ? "-" : "") + l.atom.pred + "/" + std::to_string(l.atom.args.size());
}

namespace {

struct DepGraph {
  std::vector<std::string> names;
  std::map<std::string, int> index;
  std::vector<std::vector<std::pair<int, bool>>> edges;  // head -> (body pred, negative?)

  int node(const std::string& k) {
    auto [it, fresh] = index.emplace(k, static_cast<int>(names.size()));
    if (fresh) {
      names.push_back(k);
      edges.emplace_back();
    }
    return it->second;
  }
};

DepGraph build_graph(const DatalogProgram& p) {
  DepGraph g;
  for (const auto& r : p.rules) {
    const int h = g.node(predicate_key(r.head));
    // node() may grow `edges`, so the target is created before indexing it.
    auto edge = [&](const Literal& l, bool neg) {
      if (l.kind == Kind::Builtin) return;
      const int w = g.node(predicate_key(l));
      g.edges[h].push_back({w, neg});
    };
    for (const auto& l : r.pos) edge(l, false);
    for (const auto& l : r.neg) edge(l, true);
  }
  return g;
}

/// Tarjan's algorithm; returns the component id of each node.
std::vector<int> components(const DepGraph& g) {
  const int n = static_cast<int>(g.names.size());
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on(n, false);
  int counter = 0, ncomp = 0;
  std::function<void(int)> visit = [&](int v) {
    idx[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = true;
    for (const auto& [w, neg] : g.edges[v]) {
      if (idx[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = false;
        comp[w] = ncomp;
      } while (w != v);
      ++ncomp;
    }
  };
  for (int v = 0; v < n; ++v) {
    if (idx[v] < 0) visit(v);
  }
  return comp;
}

/// Path from `from` to `to` staying inside one component (BFS).
std::vector<int> path_within(const DepGraph& g, const std::vector<int>& comp, int from, int to) {
  std::vector<int> parent(g.names.size(), -1);
  std::vector<int> queue{from};
  parent[from] = from;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int v = queue[qi];
    if (v == to) break;
    for (const auto& [w, neg] : g.edges[v]) {
      if (comp[w] == comp[from] && parent[w] < 0) {
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  std::vector<int> path;
  for (int v = to; v != from; v = parent[v]) path.push_back(v);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::vector<std::vector<std::string>> stratify(const DatalogProgram& program) {
  DepGraph g = build_graph(program);
  const std::vector<int> comp = components(g);
  const int n = static_cast<int>(g.names.size());
  for (int v = 0; v < n; ++v) {
    for (const auto& [w, neg] : g.edges[v]) {
      if (neg && comp[v] == comp[w]) {
        // v depends negatively on w, and w reaches v: report w -> ... -> v -> w.
        std::vector<int> cycle = v == w ? std::vector<int>{v} : path_within(g, comp, w, v);
        std::string text;
        for (int x : cycle) text += g.names[x] + " -> ";
        text += g.names[cycle.front()];
        throw InputError("background program is not stratified: cycle through negation " + text);
      }
    }
  }
  std::vector<int> level(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      for (const auto& [w, neg] : g.edges[v]) {
        const int need = level[w] + (neg ? 1 : 0);
        if (need > level[v]) {
          level[v] = need;
          changed = true;
        }
      }
    }
  }
  const int top = n ? *std::max_element(level.begin(), level.end()) : -1;
  std::vector<std::vector<std::string>> strata(top + 1);
  for (int v = 0; v < n; ++v) strata[level[v]].push_back(g.names[v]);
  for (auto& s : strata) std::sort(s.begin(), s.end());
  return strata;
}

namespace {

using Binding = std::map<std::string, std::string>;

class Evaluator {
 public:
  std::map<std::string, std::vector<GroundLiteral>> facts;  // by predicate key
  std::set<GroundLiteral> all;

  bool add(GroundLiteral l) {
    if (!all.insert(l).second) return false;
    facts[(l.negated ? "-" : "") + l.atom.pred + "/" + std::to_string(l.atom.args.size())].push_back(std::move(l));
    return true;
  }

  static std::string value(const Term& t, const Binding& b) { return t.is_var ? b.at(t.name) : t.name; }

  static GroundLiteral instantiate(const Literal& l, const Binding& b) {
    GroundLiteral g;
    g.atom.pred = l.atom.pred;
    g.negated = l.negated;
    for (const auto& t : l.atom.args) g.atom.args.push_back(value(t, b));
    return g;
  }

  bool holds(const Literal& l, const Binding& b) const {
    if (l.kind == Kind::Builtin) return value(l.atom.args[0], b) == value(l.atom.args[1], b);
    return all.count(instantiate(l, b)) > 0;
  }

  /// Fires `r` for every binding of its positive body; returns whether anything new was derived.
  bool fire(const DatalogRule& r) {
    std::vector<const Literal*> ordinary, builtins;
    for (const auto& l : r.pos) (l.kind == Kind::Builtin ? builtins : ordinary).push_back(&l);
    std::vector<GroundLiteral> derived;
    Binding b;
    std::function<void(std::size_t)> join = [&](std::size_t i) {
      if (i == ordinary.size()) {
        for (const auto* l : builtins) {
          if (!holds(*l, b)) return;
        }
        for (const auto& l : r.neg) {
          if (holds(l, b)) return;
        }
        derived.push_back(instantiate(r.head, b));
        return;
      }
      const Literal& l = *ordinary[i];
      const auto it = facts.find(predicate_key(l));
      if (it == facts.end()) return;
      // Copy: `facts` is not modified during the join, but keep the loop independent of it anyway.
      for (const auto& f : it->second) {
        Binding saved = b;
        bool ok = true;
        for (std::size_t k = 0; k < l.atom.args.size() && ok; ++k) {
          const Term& t = l.atom.args[k];
          if (!t.is_var) {
            ok = t.name == f.atom.args[k];
          } else if (auto bt = b.find(t.name); bt != b.end()) {
            ok = bt->second == f.atom.args[k];
          } else {
            b[t.name] = f.atom.args[k];
          }
        }
        if (ok) join(i + 1);
        b = std::move(saved);
      }
    };
    join(0);
    bool changed = false;
    for (auto& d : derived) changed |= add(std::move(d));
    return changed;
  }
};

}  // namespace

AnswerSet evaluate(const DatalogProgram& program) {
  const auto unsafe = check_safety(program);
  if (!unsafe.empty()) {
    throw InputError("background rule '" + unsafe.front().statement + "' is unsafe: " + unsafe.front().message);
  }
  const auto strata = stratify(program);
  std::map<std::string, std::size_t> level;
  for (std::size_t i = 0; i < strata.size(); ++i) {
    for (const auto& k : strata[i]) level[k] = i;
  }
  std::vector<std::vector<const DatalogRule*>> by_stratum(strata.size());
  for (const auto& r : program.rules) by_stratum[level.at(predicate_key(r.head))].push_back(&r);

  Evaluator ev;
  for (const auto& rules : by_stratum) {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto* r : rules) changed |= ev.fire(*r);
    }
  }
  for (const auto& l : ev.all) {
    if (!l.negated) continue;
    GroundLiteral pos = l;
    pos.negated = false;
    if (ev.all.count(pos)) {
      throw InputError("background knowledge is inconsistent: both " + to_string(pos) + " and " + to_string(l) +
                       " hold");
    }
  }
  return AnswerSet(std::move(ev.all));
}

}  // namespace kplan
