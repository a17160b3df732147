#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stablegl/folang/ast.hpp"

namespace stablegl::fol {

enum class Variant { Literal, Corrected };

std::string to_string(Variant v);
Variant parse_variant(std::string_view text);

struct Macro {
  std::string name;
  std::vector<std::string> params;
  FormulaPtr body;
};

// Named formulas with call-by-value parameters. A body may call only macros
// defined before it, so expansion always terminates.
class MacroRegistry {
 public:
  // Throws Error on redefinition or a call to an undefined (or the same) macro.
  void define(Macro m);
  bool contains(std::string_view name) const;
  int arity(std::string_view name) const;
  // Throws UnknownMacro.
  const Macro& get(std::string_view name) const;
  std::vector<std::string> names() const;

  static const MacroRegistry& builtins(Variant v);
  // Names and arities shared by both variants.
  static const MacroRegistry& builtin_names();

 private:
  std::map<std::string, Macro, std::less<>> macros_;
};

// phi, phi_prime, psi, theta, theta_prime, gamma, gamma_prime.
const std::vector<std::string>& builtin_list();
// Body of a builtin; throws UnknownName.
FormulaPtr builtin(std::string_view name, Variant v);
// Definition text as shipped in formulas/.
std::string builtin_source(std::string_view name, Variant v);
// File name under formulas/: "<name>.fol", or "<name>.<variant>.fol" when the
// variants differ.
std::string builtin_file(std::string_view name, Variant v);
bool varies_by_variant(std::string_view name);

}  // namespace stablegl::fol
