#include "stablegl/folang/macros.hpp"

#include "stablegl/error.hpp"
#include "stablegl/folang/parser.hpp"

namespace stablegl::fol {

namespace {

const char* const kPhi = R"(# A is conjugate to diag[xi] or diag[xi^2].
phi(A) :=
  exists X1 in conj(A) @N uptoconj: exists X2 in commconj(A, X1) @N uptoconj:
  exists Y1 in conj(A) @N uptoconj: exists Y2 in commconj(A, Y1) @N uptoconj:
  forall Z1 in conj(A) @N uptoconj: forall Z2 in commconj(A, Z1) @N uptoconj:
    A^3 = E & !(A = E)
    & X1 ~ X2 & X2 ~ Y1 & Y1 ~ Y2 & Y2 ~ A
    & X1 X2 = X2 X1 & Y1 Y2 = Y2 Y1
    & ((Z1 ~ A & Z2 ~ A & Z1 Z2 = Z2 Z1) -> (Z1 Z2 ~ Y1 Y2 | Z1 Z2 ~ X1 X2))
)";

const char* const kPhiPrime = R"(# A is conjugate to D_1 (fields without a primitive cube root of unity).
phi_prime(A) :=
  exists X1 in conj(A) @N uptoconj: exists X2 in commconj(A, X1) @N uptoconj:
  exists Y1 in conj(A) @N uptoconj: exists Y2 in commconj(A, Y1) @N uptoconj:
  forall Z1 in conj(A) @N uptoconj: forall Z2 in commconj(A, Z1) @N uptoconj:
    A^3 = E & !(A = E)
    & X1 ~ X2 & X2 ~ Y1 & Y1 ~ Y2 & Y2 ~ A
    & X1 X2 = X2 X1 & Y1 Y2 = Y2 Y1
    & ((Z1 ~ A & Z2 ~ A & Z1 Z2 = Z2 Z1) -> (Z1 Z2 ~ Y1 Y2 | Z1 Z2 ~ X1 X2 | Z1 Z2 ~ E))
)";

const char* const kPsiLiteral = R"(# Parameter A satisfies phi.
psi(B) :=
  exists X1 in commconj(A, B) @N uptoconj: exists X2 in commconj(A^2, X1) @N:
    X1 ~ A & X2 ~ A^2 & X1 X2 = X2 X1 & X1 X2 = B & !phi(B)
)";

const char* const kPsiCorrected = R"(# Parameter A satisfies phi. B = E is excluded explicitly.
psi(B) :=
  (exists X1 in commconj(A, B) @N uptoconj: exists X2 in commconj(A^2, X1) @N:
    X1 ~ A & X2 ~ A^2 & X1 X2 = X2 X1 & X1 X2 = B & !phi(B))
  & !(B = E)
)";

const char* const kThetaLiteral = R"(# Parameters: X1, X2 commuting conjugates of A in different positions,
# B satisfies psi, canonically B = X1 X2^2.
theta(C) :=
  C X1 = X1 C & C X2 = X2 C & C ~ B
  & !phi(B X1) & !phi(B X2)
  & !phi(B X1^2) & !phi(B X2^2)
)";

const char* const kThetaCorrected = R"(# Parameters: X1, X2 commuting conjugates of A in different positions,
# B satisfies psi, canonically B = X1 X2^2.
theta(C) :=
  C X1 = X1 C & C X2 = X2 C & C ~ B
  & !phi(C X1) & !phi(C X2)
  & !phi(C X1^2) & !phi(C X2^2)
)";

const char* const kThetaPrime = R"(# Parameter X satisfies phi_prime.
theta_prime(C) :=
  C X = X C & C ~ X & C X != E & C X^2 != E
)";

const char* const kGamma = R"(# M lies in the copy of GL_2 on the first two coordinates.
gamma(M) :=
  forall C in commconj(B, X1) @N: theta(C) -> M C = C M
)";

const char* const kGammaPrime = R"(# M lies in the copy of GL_2 on the first two coordinates.
gamma_prime(M) :=
  forall C in commconj(X, X) @N: theta_prime(C) -> M C = C M
)";

const char* source_of(std::string_view name, Variant v) {
  if (name == "phi") return kPhi;
  if (name == "phi_prime") return kPhiPrime;
  if (name == "psi") return v == Variant::Literal ? kPsiLiteral : kPsiCorrected;
  if (name == "theta") return v == Variant::Literal ? kThetaLiteral : kThetaCorrected;
  if (name == "theta_prime") return kThetaPrime;
  if (name == "gamma") return kGamma;
  if (name == "gamma_prime") return kGammaPrime;
  throw UnknownName("unknown builtin '" + std::string(name) + "'");
}

MacroRegistry build(Variant v) {
  MacroRegistry reg;
  for (const auto& name : builtin_list()) {
    Definition d = parse_definition(source_of(name, v), &reg);
    reg.define({d.name, d.params, d.body});
  }
  return reg;
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::Literal ? "literal" : "corrected"; }

Variant parse_variant(std::string_view text) {
  if (text == "literal") return Variant::Literal;
  if (text == "corrected") return Variant::Corrected;
  throw UnknownName("unknown variant '" + std::string(text) + "'");
}

void MacroRegistry::define(Macro m) {
  if (macros_.count(m.name)) throw Error("macro '" + m.name + "' is already defined");
  for (const auto& called : called_macros(*m.body))
    if (called == m.name || !macros_.count(called))
      throw Error("macro '" + m.name + "' calls undefined macro '" + called + "'");
  std::string name = m.name;
  macros_.emplace(std::move(name), std::move(m));
}

bool MacroRegistry::contains(std::string_view name) const { return macros_.find(name) != macros_.end(); }

int MacroRegistry::arity(std::string_view name) const { return static_cast<int>(get(name).params.size()); }

const Macro& MacroRegistry::get(std::string_view name) const {
  auto it = macros_.find(name);
  if (it == macros_.end()) throw UnknownMacro("unknown macro '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> MacroRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, m] : macros_) out.push_back(name);
  return out;
}

const MacroRegistry& MacroRegistry::builtins(Variant v) {
  static const MacroRegistry literal = build(Variant::Literal);
  static const MacroRegistry corrected = build(Variant::Corrected);
  return v == Variant::Literal ? literal : corrected;
}

const MacroRegistry& MacroRegistry::builtin_names() { return builtins(Variant::Literal); }

const std::vector<std::string>& builtin_list() {
  static const std::vector<std::string> names{"phi",   "phi_prime", "psi",        "theta",
                                              "theta_prime", "gamma", "gamma_prime"};
  return names;
}

FormulaPtr builtin(std::string_view name, Variant v) {
  source_of(name, v);
  return MacroRegistry::builtins(v).get(name).body;
}

std::string builtin_source(std::string_view name, Variant v) { return source_of(name, v); }

bool varies_by_variant(std::string_view name) { return name == "psi" || name == "theta"; }

std::string builtin_file(std::string_view name, Variant v) {
  source_of(name, v);
  if (varies_by_variant(name)) return std::string(name) + "." + to_string(v) + ".fol";
  return std::string(name) + ".fol";
}

}  // namespace stablegl::fol
