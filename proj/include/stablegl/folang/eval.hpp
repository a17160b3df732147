#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stablegl/folang/ast.hpp"
#include "stablegl/folang/macros.hpp"
#include "stablegl/order3.hpp"
#include "stablegl/stable_matrix.hpp"

namespace stablegl::fol {

using Bindings = std::map<std::string, StableMatrix, std::less<>>;

struct EvalOptions {
  int witness_bound = 0;  // 0: default_witness_bound(bindings)
  Variant variant = Variant::Corrected;
  const MacroRegistry* macros = nullptr;  // overrides variant
  // Enumerate every domain in full, ignoring uptoconj.
  bool force_full = false;
  // Decide A ~ B by searching U in GL_N instead of canonical forms.
  bool quantified_conj = false;
  bool solve_equations = true;
  bool hoist_guards = true;
  // Workers for the outermost quantifier; 0 reads STABLEGL_WORKERS, then the
  // OpenMP default.
  int workers = 0;
  std::uint64_t budget = 100'000'000;
};

struct EvalStats {
  std::uint64_t domains_built = 0;
  std::uint64_t domain_elements = 0;  // total over built domains
  std::uint64_t largest_domain = 0;
  std::uint64_t bindings_visited = 0;
  std::uint64_t macro_calls = 0;
  std::uint64_t macro_memo_hits = 0;
  std::uint64_t equations_solved = 0;
  std::uint64_t guards_hoisted = 0;

  void merge(const EvalStats& o);
};

using Assignment = std::vector<std::pair<std::string, StableMatrix>>;

struct EvalResult {
  bool value = false;
  int witness_bound = 0;
  // Values of the leading block of existentials when true.
  Assignment witnesses;
  // Values of the leading block of universals when false.
  Assignment counterexample;
  EvalStats stats;
};

int default_witness_bound(const Bindings& bindings);
int resolve_workers(int requested);

// Throws UnboundParameter, SupportTooSmall (a binding exceeds N),
// BudgetExceeded.
EvalResult eval(const Formula& f, const Field& field, const Bindings& bindings,
                const EvalOptions& options = {});
EvalResult eval(std::string_view source, const Field& field, const Bindings& bindings,
                const EvalOptions& options = {});

// Substitutes the recorded witnesses (or counterexample) for the leading
// quantifiers, checks domain membership, and re-evaluates the residue.
bool verify_assignment(const Formula& f, const Field& field, const Bindings& bindings,
                       const EvalResult& result, const EvalOptions& options = {});

// Truth of f with `param` bound to the canonical matrix of each signature.
std::map<Order3Signature, bool> characterize(const Formula& f, const Field& field, int witness_bound,
                                             const std::vector<Order3Signature>& candidates,
                                             const std::string& param, const Bindings& others = {},
                                             const EvalOptions& options = {});

}  // namespace stablegl::fol
