#include "kplan/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "kplan/error.hpp"

namespace kplan {

namespace {

enum class Tok { Ident, Var, Int, LParen, RParen, Comma, Dot, Colon, Implies, Question, Minus, Eq, Neq, End };

struct Token {
  Tok type;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const int l = line, cl = col;
    auto single = [&](Tok t) {
      out.push_back({t, std::string(1, c), l, cl});
      advance(1);
    };
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word(src.substr(i, j - i));
      const Tok t = std::isupper(static_cast<unsigned char>(c)) ? Tok::Var : Tok::Ident;
      out.push_back({t, word, l, cl});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, std::string(src.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    switch (c) {
      case '(': single(Tok::LParen); break;
      case ')': single(Tok::RParen); break;
      case ',': single(Tok::Comma); break;
      case '.': single(Tok::Dot); break;
      case '?': single(Tok::Question); break;
      case '-': single(Tok::Minus); break;
      case '=': single(Tok::Eq); break;
      case ':':
        if (i + 1 < src.size() && src[i + 1] == '-') {
          out.push_back({Tok::Implies, ":-", l, cl});
          advance(2);
        } else {
          single(Tok::Colon);
        }
        break;
      case '<':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          out.push_back({Tok::Neq, "<>", l, cl});
          advance(2);
          break;
        }
        throw ParseError("unexpected character '<'", l, cl);
      case '!':
        if (i + 1 < src.size() && src[i + 1] == '=') {
          out.push_back({Tok::Neq, "!=", l, cl});
          advance(2);
          break;
        }
        throw ParseError("unexpected character '!'", l, cl);
      default: throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const std::set<std::string> kSections = {"background", "fluents", "actions", "always", "initially", "goal"};
const std::set<std::string> kReserved = {"caused",  "if",       "after",        "not",       "executable",
                                         "inertial", "default", "total",        "forbidden", "nonexecutable",
                                         "requires", "false",   "noConcurrency"};

enum class Section { None, Background, Fluents, Actions, Always, Initially, Goal };

/// A body item as written, before it is split into positive and default-negated lists.
struct BodyItem {
  Literal lit;
  bool naf = false;
  int line = 0, col = 0;
};

struct Body {
  std::vector<BodyItem> items;
  void split(std::vector<Literal>& pos, std::vector<Literal>& neg) const {
    for (const auto& it : items) (it.naf ? neg : pos).push_back(it.lit);
  }
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  KProgram program() {
    KProgram prog;
    Section sec = Section::None;
    while (peek().type != Tok::End) {
      if (at_section_header()) {
        sec = section_header();
        continue;
      }
      switch (sec) {
        case Section::None:
          throw error("statement outside of any section (expected 'fluents:', 'actions:', 'always:', ...)");
        case Section::Background: prog.background.rules.push_back(datalog_rule()); break;
        case Section::Fluents: prog.fluent_decls.push_back(declaration()); break;
        case Section::Actions: prog.action_decls.push_back(declaration()); break;
        case Section::Always: always_statement(prog, false); break;
        case Section::Initially: always_statement(prog, true); break;
        case Section::Goal:
          if (prog.query) throw error("more than one query in goal section");
          prog.query = query();
          break;
      }
    }
    std::stable_partition(prog.macros.begin(), prog.macros.end(), [](const MacroStatement& m) { return !m.initial; });
    return prog;
  }

  DatalogProgram datalog() {
    DatalogProgram p;
    while (peek().type != Tok::End) p.rules.push_back(datalog_rule());
    return p;
  }

  Literal single_literal() {
    BodyItem it = body_item();
    if (it.naf) throw ParseError("expected a literal, not a default-negated item", it.line, it.col);
    if (peek().type == Tok::Dot) next();
    expect(Tok::End, "end of input");
    return it.lit;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  ParseError error(const std::string& msg) const { return ParseError(msg, peek().line, peek().col); }

  Token expect(Tok t, const char* what) {
    if (peek().type != t) {
      if (peek().type == Tok::End) throw error(std::string("unexpected end of input, expected ") + what);
      throw error(std::string("expected ") + what + ", found '" + peek().text + "'");
    }
    return next();
  }

  bool is_keyword(const char* kw, std::size_t k = 0) const {
    return peek(k).type == Tok::Ident && peek(k).text == kw;
  }

  bool at_section_header() const {
    return peek().type == Tok::Ident && peek(1).type == Tok::Colon;
  }

  Section section_header() {
    const Token name = next();
    next();
    if (!kSections.count(name.text)) {
      throw ParseError("unknown section keyword '" + name.text + "'", name.line, name.col);
    }
    if (name.text == "background") return Section::Background;
    if (name.text == "fluents") return Section::Fluents;
    if (name.text == "actions") return Section::Actions;
    if (name.text == "always") return Section::Always;
    if (name.text == "initially") return Section::Initially;
    return Section::Goal;
  }

  void end_statement() {
    if (peek().type == Tok::Dot) {
      next();
      return;
    }
    if (peek().type == Tok::End || at_section_header()) throw error("unterminated statement (missing '.')");
    throw error("expected '.', found '" + peek().text + "'");
  }

  Term term() {
    const Token& t = peek();
    if (t.type == Tok::Var) return Term::var(next().text);
    if (t.type == Tok::Ident || t.type == Tok::Int) {
      if (t.type == Tok::Ident && kReserved.count(t.text)) throw error("keyword '" + t.text + "' used as a term");
      return Term::constant(next().text);
    }
    throw error("expected a term, found '" + t.text + "'");
  }

  Atom atom() {
    const Token name = expect(Tok::Ident, "a predicate name");
    if (kReserved.count(name.text) || kSections.count(name.text)) {
      throw ParseError("keyword '" + name.text + "' used as a predicate name", name.line, name.col);
    }
    Atom a{name.text, {}};
    if (peek().type == Tok::LParen) {
      next();
      a.args.push_back(term());
      while (peek().type == Tok::Comma) {
        next();
        a.args.push_back(term());
      }
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  static Literal builtin_eq(Term lhs, Term rhs) {
    Literal l;
    l.atom = Atom{"=", {std::move(lhs), std::move(rhs)}};
    l.kind = Kind::Builtin;
    return l;
  }

  /// Parses `[not] [-]atom`, `T = T`, `T <> T` or `not (T = T)`.
  BodyItem body_item() {
    BodyItem it;
    it.line = peek().line;
    it.col = peek().col;
    if (is_keyword("not")) {
      next();
      it.naf = true;
    }
    if (peek().type == Tok::LParen) {
      next();
      Term lhs = term();
      expect(Tok::Eq, "'='");
      Term rhs = term();
      expect(Tok::RParen, "')'");
      it.lit = builtin_eq(std::move(lhs), std::move(rhs));
      return it;
    }
    if (peek().type == Tok::Minus) {
      next();
      it.lit.atom = atom();
      it.lit.negated = true;
      return it;
    }
    const bool comparison = peek().type == Tok::Var || peek().type == Tok::Int ||
                            (peek().type == Tok::Ident && (peek(1).type == Tok::Eq || peek(1).type == Tok::Neq));
    if (comparison) {
      Term lhs = term();
      if (peek().type == Tok::Eq) {
        next();
        it.lit = builtin_eq(std::move(lhs), term());
      } else if (peek().type == Tok::Neq) {
        if (it.naf) throw error("'not' cannot be combined with '<>'");
        next();
        it.lit = builtin_eq(std::move(lhs), term());
        it.naf = true;
      } else {
        throw error("expected '=' or '<>' after term '" + lhs.name + "'");
      }
      return it;
    }
    it.lit.atom = atom();
    return it;
  }

  Body body() {
    Body b;
    b.items.push_back(body_item());
    while (peek().type == Tok::Comma) {
      next();
      b.items.push_back(body_item());
    }
    return b;
  }

  /// Optional `if B` and `after A` parts.
  void if_after(Body& post, Body& pre, bool allow_if = true) {
    if (allow_if && is_keyword("if")) {
      next();
      post = body();
    }
    if (is_keyword("after")) {
      next();
      pre = body();
    }
  }

  DatalogRule datalog_rule() {
    DatalogRule r;
    const Token start = peek();
    BodyItem head = body_item();
    if (head.naf || head.lit.kind == Kind::Builtin) {
      throw ParseError("rule head must be a (possibly strongly negated) atom", start.line, start.col);
    }
    r.head = head.lit;
    if (peek().type == Tok::Implies) {
      next();
      body().split(r.pos, r.neg);
    }
    end_statement();
    return r;
  }

  Declaration declaration() {
    Declaration d;
    d.head = atom();
    if (is_keyword("requires")) {
      next();
      Body b = body();
      for (const auto& it : b.items) {
        if (it.naf) throw ParseError("default negation is not allowed after 'requires'", it.line, it.col);
        d.requires_.push_back(it.lit);
      }
    }
    end_statement();
    return d;
  }

  static void require_no_naf(const BodyItem& it, const char* what) {
    if (it.naf) throw ParseError(std::string(what) + " must not be default-negated", it.line, it.col);
  }

  void always_statement(KProgram& prog, bool initial) {
    const Token start = peek();
    if (is_keyword("noConcurrency")) {
      next();
      end_statement();
      prog.no_concurrency = true;
      return;
    }
    if (is_keyword("executable")) {
      if (initial) throw error("executability conditions are not allowed in the initially section");
      next();
      ExecutabilityCondition e;
      e.action = atom();
      if (is_keyword("if")) {
        next();
        body().split(e.pre_pos, e.pre_neg);
      }
      end_statement();
      prog.executables.push_back(std::move(e));
      return;
    }
    if (is_keyword("nonexecutable")) {
      if (initial) throw error("nonexecutable is not allowed in the initially section");
      next();
      MacroStatement m;
      m.kind = MacroKind::Nonexecutable;
      Literal a;
      a.atom = atom();
      m.target = a;
      if (is_keyword("if")) {
        next();
        body().split(m.pre_pos, m.pre_neg);
      }
      end_statement();
      prog.macros.push_back(std::move(m));
      return;
    }
    if (is_keyword("forbidden")) {
      next();
      MacroStatement m;
      m.kind = MacroKind::Forbidden;
      m.initial = initial;
      Body post, pre;
      if (!is_keyword("after") && peek().type != Tok::Dot) post = body();
      if_after(post, pre, false);
      post.split(m.post_pos, m.post_neg);
      pre.split(m.pre_pos, m.pre_neg);
      check_static(m.pre_pos, m.pre_neg, initial, start);
      end_statement();
      prog.macros.push_back(std::move(m));
      return;
    }
    if (is_keyword("inertial") || is_keyword("default") || is_keyword("total")) {
      const std::string kw = next().text;
      MacroStatement m;
      m.kind = kw == "inertial" ? MacroKind::Inertial : kw == "default" ? MacroKind::Default : MacroKind::Total;
      m.initial = initial;
      BodyItem target = body_item();
      require_no_naf(target, "the macro target");
      if (target.lit.kind == Kind::Builtin) throw ParseError("macro target must be a fluent", target.line, target.col);
      m.target = target.lit;
      Body post, pre;
      if_after(post, pre);
      post.split(m.post_pos, m.post_neg);
      pre.split(m.pre_pos, m.pre_neg);
      if (initial && m.kind == MacroKind::Inertial) {
        throw ParseError("inertial is not allowed in the initially section", start.line, start.col);
      }
      check_static(m.pre_pos, m.pre_neg, initial, start);
      end_statement();
      prog.macros.push_back(std::move(m));
      return;
    }
    // Causation rule; the `caused` keyword is optional.
    if (is_keyword("caused")) next();
    CausationRule r;
    r.initial = initial;
    if (is_keyword("false")) {
      next();
    } else {
      BodyItem h = body_item();
      if (h.naf || h.lit.kind == Kind::Builtin) {
        throw ParseError("rule head must be a fluent literal or 'false'", h.line, h.col);
      }
      r.head = h.lit;
    }
    Body post, pre;
    if_after(post, pre);
    post.split(r.post_pos, r.post_neg);
    pre.split(r.pre_pos, r.pre_neg);
    check_static(r.pre_pos, r.pre_neg, initial, start);
    end_statement();
    (initial ? prog.initial_rules : prog.always_rules).push_back(std::move(r));
  }

  static void check_static(const std::vector<Literal>& pre_pos, const std::vector<Literal>& pre_neg, bool initial,
                           const Token& start) {
    if (initial && (!pre_pos.empty() || !pre_neg.empty())) {
      throw ParseError("initial state constraints must not have an 'after' part", start.line, start.col);
    }
  }

  Query query() {
    Query q;
    if (peek().type != Tok::Question) body().split(q.goal_pos, q.goal_neg);
    expect(Tok::Question, "'?'");
    expect(Tok::LParen, "'('");
    const Token n = expect(Tok::Int, "the plan length");
    expect(Tok::RParen, "')'");
    if (peek().type == Tok::Dot) next();
    q.plan_length = std::stoi(n.text);
    return q;
  }
};

struct Signature {
  Kind kind;
  std::size_t arity;
};

class Resolver {
 public:
  explicit Resolver(const KProgram& p) {
    for (const auto& d : p.fluent_decls) declare(d, Kind::Fluent);
    for (const auto& d : p.action_decls) declare(d, Kind::Action);
  }

  void resolve(Literal& l, const std::string& where) const {
    if (l.kind == Kind::Builtin) return;
    const auto it = sig_.find(l.atom.pred);
    if (it == sig_.end()) {
      l.kind = Kind::Type;
      return;
    }
    if (it->second.arity != l.atom.args.size()) {
      throw InputError("arity mismatch for '" + l.atom.pred + "' in " + where + ": declared with " +
                       std::to_string(it->second.arity) + " argument(s)");
    }
    l.kind = it->second.kind;
    if (l.kind == Kind::Action && l.negated) {
      throw InputError("action literal '" + to_string(l) + "' cannot be strongly negated (" + where + ")");
    }
  }

  void resolve_all(std::vector<Literal>& ls, const std::string& where) const {
    for (auto& l : ls) resolve(l, where);
  }

 private:
  std::map<std::string, Signature> sig_;

  void declare(const Declaration& d, Kind k) {
    const auto [it, fresh] = sig_.emplace(d.head.pred, Signature{k, d.head.args.size()});
    if (!fresh && (it->second.kind != k || it->second.arity != d.head.args.size())) {
      throw InputError("conflicting declarations for '" + d.head.pred + "'");
    }
    std::set<std::string> seen;
    for (const auto& t : d.requires_) {
      for (const auto& a : t.atom.args) {
        if (a.is_var) seen.insert(a.name);
      }
    }
    for (const auto& a : d.head.args) {
      if (a.is_var && !seen.count(a.name)) {
        throw InputError("variable " + a.name + " of declaration '" + to_string(d.head) +
                         "' does not occur in its type requirements");
      }
    }
  }
};

void no_actions(const std::vector<Literal>& ls, const std::string& where) {
  for (const auto& l : ls) {
    if (l.kind == Kind::Action) throw InputError("action literal '" + to_string(l) + "' not allowed in " + where);
  }
}

void resolve_program(KProgram& p) {
  const Resolver r(p);
  // Declarations name fluents/actions; their requirements must be background predicates.
  for (auto* decls : {&p.fluent_decls, &p.action_decls}) {
    for (auto& d : *decls) {
      for (auto& l : d.requires_) {
        Literal copy = l;
        r.resolve(copy, "declaration");
        if (copy.kind != Kind::Type && copy.kind != Kind::Builtin) {
          throw InputError("requirement '" + to_string(l) + "' must be a type literal");
        }
        l.kind = copy.kind;
      }
    }
  }
  for (auto& rule : p.background.rules) {
    for (auto* ls : {&rule.pos, &rule.neg}) {
      for (auto& l : *ls) {
        Literal copy = l;
        r.resolve(copy, "background");
        if (copy.kind == Kind::Fluent || copy.kind == Kind::Action) {
          throw InputError("background rule refers to dynamic predicate '" + l.atom.pred + "'");
        }
      }
    }
    Literal h = rule.head;
    r.resolve(h, "background");
    if (h.kind != Kind::Type) throw InputError("background rule defines dynamic predicate '" + h.atom.pred + "'");
  }
  auto causation = [&](CausationRule& c) {
    const std::string where = "rule '" + to_string(c) + "'";
    if (c.head) {
      r.resolve(*c.head, where);
      if (c.head->kind != Kind::Fluent) throw InputError("head of " + where + " must be a fluent literal or false");
    }
    r.resolve_all(c.post_pos, where);
    r.resolve_all(c.post_neg, where);
    r.resolve_all(c.pre_pos, where);
    r.resolve_all(c.pre_neg, where);
    no_actions(c.post_pos, "the if-part of " + where);
    no_actions(c.post_neg, "the if-part of " + where);
  };
  for (auto& c : p.always_rules) causation(c);
  for (auto& c : p.initial_rules) causation(c);
  for (auto& e : p.executables) {
    const std::string where = "condition '" + to_string(e) + "'";
    Literal h;
    h.atom = e.action;
    r.resolve(h, where);
    if (h.kind != Kind::Action) throw InputError("'" + to_string(e.action) + "' in " + where + " is not a declared action");
    r.resolve_all(e.pre_pos, where);
    r.resolve_all(e.pre_neg, where);
  }
  for (auto& m : p.macros) {
    const std::string where = "macro '" + to_string(m) + "'";
    if (m.target) {
      r.resolve(*m.target, where);
      const Kind want = m.kind == MacroKind::Nonexecutable ? Kind::Action : Kind::Fluent;
      if (m.target->kind != want) {
        throw InputError("target of " + where + (want == Kind::Action ? " must be an action" : " must be a fluent"));
      }
    }
    r.resolve_all(m.post_pos, where);
    r.resolve_all(m.post_neg, where);
    r.resolve_all(m.pre_pos, where);
    r.resolve_all(m.pre_neg, where);
    no_actions(m.post_pos, "the if-part of " + where);
    no_actions(m.post_neg, "the if-part of " + where);
  }
  if (p.query) {
    for (auto* ls : {&p.query->goal_pos, &p.query->goal_neg}) {
      for (auto& l : *ls) {
        r.resolve(l, "goal");
        if (l.kind != Kind::Fluent) throw InputError("goal literal '" + to_string(l) + "' is not a declared fluent");
        if (!l.ground()) throw InputError("goal literal '" + to_string(l) + "' must be variable-free");
      }
    }
  }
}

}  // namespace

KProgram parse(std::string_view text, std::string_view background_text) {
  KProgram p = Parser(text).program();
  if (!background_text.empty()) {
    DatalogProgram extra = Parser(background_text).datalog();
    p.background.rules.insert(p.background.rules.end(), extra.rules.begin(), extra.rules.end());
  }
  resolve_program(p);
  return p;
}

DatalogProgram parse_background(std::string_view text) { return Parser(text).datalog(); }

Literal parse_literal(std::string_view text) { return Parser(text).single_literal(); }

}  // namespace kplan
