#pragma once

#include <string>
#include <vector>

#include "kplan/syntax.hpp"

namespace kplan {

struct SafetyDiagnostic {
  std::string statement;  ///< the offending statement, printed
  std::string variable;
  std::string message;
};

/// Reports every variable that occurs in a default-negated type literal but in no
/// other literal of its statement, and every background rule that is unsafe in the
/// usual logic-programming sense. An empty result means the program is safe.
/// Macros, if still present, are checked in expanded form.
std::vector<SafetyDiagnostic> check_safety(const KProgram& program);

/// Standard range-restriction check for a Datalog program.
std::vector<SafetyDiagnostic> check_safety(const DatalogProgram& program);

}  // namespace kplan
