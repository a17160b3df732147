#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace stablegl::fol {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

enum class TermKind { Var, Param, Identity, Product, Inverse, Power };

struct Term {
  TermKind kind;
  std::string name;  // Var, Param
  TermPtr left;      // Product, Inverse, Power
  TermPtr right;     // Product
  int exponent = 0;  // Power
};

TermPtr var(std::string name);
TermPtr param(std::string name);
TermPtr identity_term();
TermPtr product(TermPtr a, TermPtr b);
TermPtr inverse(TermPtr a);
// power(t, 0) is E.
TermPtr power(TermPtr a, int exponent);

bool equal(const Term& a, const Term& b);

struct Domain {
  enum class Kind { Group, Order3, Conj, CommConj };
  Kind kind = Kind::Group;
  TermPtr of;    // Conj, CommConj: conjugates of this term
  TermPtr with;  // CommConj: ... that commute with this term
  bool uptoconj = false;
  std::optional<int> bound;  // nullopt: the evaluation-time witness bound N
};

bool equal(const Domain& a, const Domain& b);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

enum class FormulaKind { Equal, Conj, Not, And, Or, Implies, Exists, Forall, Macro };

struct Formula {
  FormulaKind kind;
  TermPtr lhs, rhs;         // Equal, Conj
  FormulaPtr a, b;          // Not (a), And/Or/Implies (a, b), quantifiers (a = body)
  std::string name;         // quantified variable or macro name
  Domain domain;            // quantifiers
  std::vector<TermPtr> args;  // Macro
};

FormulaPtr equal_atom(TermPtr l, TermPtr r);
FormulaPtr conj_atom(TermPtr l, TermPtr r);
FormulaPtr not_equal_atom(TermPtr l, TermPtr r);
FormulaPtr negation(FormulaPtr f);
FormulaPtr conjunction(FormulaPtr a, FormulaPtr b);
FormulaPtr disjunction(FormulaPtr a, FormulaPtr b);
FormulaPtr implication(FormulaPtr a, FormulaPtr b);
FormulaPtr exists(std::string v, Domain d, FormulaPtr body);
FormulaPtr forall(std::string v, Domain d, FormulaPtr body);
FormulaPtr macro_call(std::string name, std::vector<TermPtr> args);

bool equal(const Formula& a, const Formula& b);

std::string print(const Term& t);
std::string print(const Domain& d);
std::string print(const Formula& f);

// Names occurring free (variables not bound inside f, and parameters).
std::set<std::string> free_names(const Term& t);
std::set<std::string> free_names(const Formula& f);
// Free parameter names only.
std::set<std::string> parameters(const Formula& f);
// Macro names called anywhere in f.
std::set<std::string> called_macros(const Formula& f);
int depth(const Formula& f);

}  // namespace stablegl::fol
