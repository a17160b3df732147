#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stablegl/folang/ast.hpp"

namespace stablegl::fol {

class MacroRegistry;

// Parses a formula. Macro calls are checked against `macros` (name and arity);
// nullptr checks against the builtin names. Throws SyntaxError or UnknownMacro.
FormulaPtr parse(std::string_view source, const MacroRegistry* macros = nullptr);
TermPtr parse_term(std::string_view source);

// "name(P1, P2) := formula", as in the shipped .fol files; '#' starts a comment.
struct Definition {
  std::string name;
  std::vector<std::string> params;
  FormulaPtr body;
};
Definition parse_definition(std::string_view source, const MacroRegistry* macros = nullptr);

}  // namespace stablegl::fol
