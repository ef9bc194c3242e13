#include "kplan/macros.hpp"

#include "kplan/error.hpp"

namespace kplan {

namespace {

void append(std::vector<Literal>& to, const std::vector<Literal>& from) { to.insert(to.end(), from.begin(), from.end()); }

}  // namespace

KProgram expand_macros(const KProgram& program) {
  KProgram out = program;
  out.macros.clear();
  for (const auto& m : program.macros) {
    auto& dest = m.initial ? out.initial_rules : out.always_rules;
    CausationRule r;
    r.initial = m.initial;
    switch (m.kind) {
      case MacroKind::Inertial:
        // caused f if not -.f, B after f, A.
        r.head = m.target;
        r.post_neg.push_back(m.target->complement());
        append(r.post_pos, m.post_pos);
        append(r.post_neg, m.post_neg);
        r.pre_pos.push_back(*m.target);
        append(r.pre_pos, m.pre_pos);
        r.pre_neg = m.pre_neg;
        dest.push_back(std::move(r));
        break;
      case MacroKind::Default:
        r.head = m.target;
        r.post_neg.push_back(m.target->complement());
        append(r.post_pos, m.post_pos);
        append(r.post_neg, m.post_neg);
        r.pre_pos = m.pre_pos;
        r.pre_neg = m.pre_neg;
        dest.push_back(std::move(r));
        break;
      case MacroKind::Total: {
        if (m.target->negated) {
          throw InputError("total requires a positive fluent, got '" + to_string(*m.target) + "'");
        }
        for (const Literal& f : {*m.target, m.target->complement()}) {
          CausationRule half = r;
          half.head = f;
          half.post_neg.push_back(f.complement());
          append(half.post_pos, m.post_pos);
          append(half.post_neg, m.post_neg);
          half.pre_pos = m.pre_pos;
          half.pre_neg = m.pre_neg;
          dest.push_back(std::move(half));
        }
        break;
      }
      case MacroKind::Forbidden:
        r.post_pos = m.post_pos;
        r.post_neg = m.post_neg;
        r.pre_pos = m.pre_pos;
        r.pre_neg = m.pre_neg;
        dest.push_back(std::move(r));
        break;
      case MacroKind::Nonexecutable:
        // caused false after a, B.
        r.pre_pos.push_back(*m.target);
        append(r.pre_pos, m.pre_pos);
        r.pre_neg = m.pre_neg;
        dest.push_back(std::move(r));
        break;
    }
  }
  return out;
}

}  // namespace kplan
