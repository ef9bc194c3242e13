#pragma once

#include <string_view>

#include "kplan/syntax.hpp"

namespace kplan {

/// Parses a sectioned K problem. `background_text` holds Datalog rules that are
/// appended to any `background:` section of `text`. Literal kinds (fluent, action,
/// type) are resolved against the declarations, and the typing constraints on
/// rule parts are enforced.
///
/// Throws ParseError for lexical/syntactic problems and InputError for typing problems.
KProgram parse(std::string_view text, std::string_view background_text = {});

/// Parses a stand-alone Datalog program ("head :- body." rules and facts).
DatalogProgram parse_background(std::string_view text);

/// Parses a single ground fluent literal such as "-on(a,b)"; used for plan and state files.
Literal parse_literal(std::string_view text);

}  // namespace kplan
