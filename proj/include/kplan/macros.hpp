#pragma once

#include "kplan/syntax.hpp"

namespace kplan {

/// Rewrites every macro statement into core causation rules. The noConcurrency
/// marker is left on the program; it is expanded during grounding, once the legal
/// action instances are known. Throws InputError when `total` targets a negative literal.
KProgram expand_macros(const KProgram& program);

}  // namespace kplan
