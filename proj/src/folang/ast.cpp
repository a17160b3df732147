#include "stablegl/folang/ast.hpp"

#include <functional>

namespace stablegl::fol {

namespace {
TermPtr make_term(Term t) { return std::make_shared<const Term>(std::move(t)); }
FormulaPtr make_formula(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
}  // namespace

TermPtr var(std::string name) { return make_term({TermKind::Var, std::move(name), {}, {}, 0}); }
TermPtr param(std::string name) { return make_term({TermKind::Param, std::move(name), {}, {}, 0}); }
TermPtr identity_term() { return make_term({TermKind::Identity, {}, {}, {}, 0}); }
TermPtr product(TermPtr a, TermPtr b) {
  return make_term({TermKind::Product, {}, std::move(a), std::move(b), 0});
}
TermPtr inverse(TermPtr a) { return make_term({TermKind::Inverse, {}, std::move(a), {}, 0}); }
TermPtr power(TermPtr a, int exponent) {
  if (exponent == 0) return identity_term();
  return make_term({TermKind::Power, {}, std::move(a), {}, exponent});
}

bool equal(const Term& a, const Term& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::Var:
    case TermKind::Param:
      return a.name == b.name;
    case TermKind::Identity:
      return true;
    case TermKind::Product:
      return equal(*a.left, *b.left) && equal(*a.right, *b.right);
    case TermKind::Inverse:
      return equal(*a.left, *b.left);
    case TermKind::Power:
      return a.exponent == b.exponent && equal(*a.left, *b.left);
  }
  return false;
}

bool equal(const Domain& a, const Domain& b) {
  auto same = [](const TermPtr& x, const TermPtr& y) {
    return (!x && !y) || (x && y && equal(*x, *y));
  };
  return a.kind == b.kind && same(a.of, b.of) && same(a.with, b.with) && a.uptoconj == b.uptoconj &&
         a.bound == b.bound;
}

FormulaPtr equal_atom(TermPtr l, TermPtr r) {
  Formula f{FormulaKind::Equal, std::move(l), std::move(r), {}, {}, {}, {}, {}};
  return make_formula(std::move(f));
}
FormulaPtr conj_atom(TermPtr l, TermPtr r) {
  Formula f{FormulaKind::Conj, std::move(l), std::move(r), {}, {}, {}, {}, {}};
  return make_formula(std::move(f));
}
FormulaPtr not_equal_atom(TermPtr l, TermPtr r) { return negation(equal_atom(std::move(l), std::move(r))); }
FormulaPtr negation(FormulaPtr a) {
  Formula f{FormulaKind::Not, {}, {}, std::move(a), {}, {}, {}, {}};
  return make_formula(std::move(f));
}
namespace {
FormulaPtr binary(FormulaKind k, FormulaPtr a, FormulaPtr b) {
  Formula f{k, {}, {}, std::move(a), std::move(b), {}, {}, {}};
  return make_formula(std::move(f));
}
FormulaPtr quant(FormulaKind k, std::string v, Domain d, FormulaPtr body) {
  Formula f{k, {}, {}, std::move(body), {}, std::move(v), std::move(d), {}};
  return make_formula(std::move(f));
}
}  // namespace
FormulaPtr conjunction(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::And, std::move(a), std::move(b)); }
FormulaPtr disjunction(FormulaPtr a, FormulaPtr b) { return binary(FormulaKind::Or, std::move(a), std::move(b)); }
FormulaPtr implication(FormulaPtr a, FormulaPtr b) {
  return binary(FormulaKind::Implies, std::move(a), std::move(b));
}
FormulaPtr exists(std::string v, Domain d, FormulaPtr body) {
  return quant(FormulaKind::Exists, std::move(v), std::move(d), std::move(body));
}
FormulaPtr forall(std::string v, Domain d, FormulaPtr body) {
  return quant(FormulaKind::Forall, std::move(v), std::move(d), std::move(body));
}
FormulaPtr macro_call(std::string name, std::vector<TermPtr> args) {
  Formula f{FormulaKind::Macro, {}, {}, {}, {}, std::move(name), {}, std::move(args)};
  return make_formula(std::move(f));
}

bool equal(const Formula& a, const Formula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case FormulaKind::Equal:
    case FormulaKind::Conj:
      return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
    case FormulaKind::Not:
      return equal(*a.a, *b.a);
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      return equal(*a.a, *b.a) && equal(*a.b, *b.b);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return a.name == b.name && equal(a.domain, b.domain) && equal(*a.a, *b.a);
    case FormulaKind::Macro:
      if (a.name != b.name || a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!equal(*a.args[i], *b.args[i])) return false;
      return true;
  }
  return false;
}

namespace {

std::string print_factor(const Term& t) {
  if (t.kind == TermKind::Product) return "(" + print(t) + ")";
  return print(t);
}

// Formula precedence: 1 implies, 2 or, 3 and, 4 not, 5 atom.
int precedence(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Implies:
      return 1;
    case FormulaKind::Or:
      return 2;
    case FormulaKind::And:
      return 3;
    case FormulaKind::Not:
      return f.a->kind == FormulaKind::Equal ? 5 : 4;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return 0;
    default:
      return 5;
  }
}

std::string print_at(const Formula& f, int min_prec) {
  std::string s = print(f);
  return precedence(f) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string print(const Term& t) {
  switch (t.kind) {
    case TermKind::Var:
    case TermKind::Param:
      return t.name;
    case TermKind::Identity:
      return "E";
    case TermKind::Product:
      return print(*t.left) + " " + print_factor(*t.right);
    case TermKind::Inverse:
      return print_factor(*t.left) + "^-1";
    case TermKind::Power:
      return print_factor(*t.left) + "^" + std::to_string(t.exponent);
  }
  return {};
}

std::string print(const Domain& d) {
  std::string s;
  switch (d.kind) {
    case Domain::Kind::Group:
      s = "group";
      break;
    case Domain::Kind::Order3:
      s = "order3";
      break;
    case Domain::Kind::Conj:
      s = "conj(" + print(*d.of) + ")";
      break;
    case Domain::Kind::CommConj:
      s = "commconj(" + print(*d.of) + ", " + print(*d.with) + ")";
      break;
  }
  s += " @" + (d.bound ? std::to_string(*d.bound) : std::string("N"));
  if (d.uptoconj) s += " uptoconj";
  return s;
}

std::string print(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Equal:
      return print(*f.lhs) + " = " + print(*f.rhs);
    case FormulaKind::Conj:
      return print(*f.lhs) + " ~ " + print(*f.rhs);
    case FormulaKind::Not:
      if (f.a->kind == FormulaKind::Equal) return print(*f.a->lhs) + " != " + print(*f.a->rhs);
      return "!" + print_at(*f.a, 4);
    case FormulaKind::And:
      return print_at(*f.a, 3) + " & " + print_at(*f.b, 4);
    case FormulaKind::Or:
      return print_at(*f.a, 2) + " | " + print_at(*f.b, 3);
    case FormulaKind::Implies:
      return print_at(*f.a, 2) + " -> " + print_at(*f.b, 1);
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      return std::string(f.kind == FormulaKind::Exists ? "exists " : "forall ") + f.name + " in " +
             print(f.domain) + ": " + print(*f.a);
    case FormulaKind::Macro: {
      std::string s = f.name + "(";
      for (std::size_t i = 0; i < f.args.size(); ++i) s += (i ? ", " : "") + print(*f.args[i]);
      return s + ")";
    }
  }
  return {};
}

std::set<std::string> free_names(const Term& t) {
  std::set<std::string> out;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.kind == TermKind::Var || u.kind == TermKind::Param) out.insert(u.name);
    if (u.left) walk(*u.left);
    if (u.right) walk(*u.right);
  };
  walk(t);
  return out;
}

namespace {
void collect(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out,
             bool params_only) {
  auto add_term = [&](const TermPtr& t) {
    if (!t) return;
    std::function<void(const Term&)> walk = [&](const Term& u) {
      if ((u.kind == TermKind::Param || (!params_only && u.kind == TermKind::Var)) && !bound.count(u.name))
        out.insert(u.name);
      if (u.left) walk(*u.left);
      if (u.right) walk(*u.right);
    };
    walk(*t);
  };
  switch (f.kind) {
    case FormulaKind::Equal:
    case FormulaKind::Conj:
      add_term(f.lhs);
      add_term(f.rhs);
      break;
    case FormulaKind::Not:
      collect(*f.a, bound, out, params_only);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      collect(*f.a, bound, out, params_only);
      collect(*f.b, bound, out, params_only);
      break;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      add_term(f.domain.of);
      add_term(f.domain.with);
      const bool fresh = bound.insert(f.name).second;
      collect(*f.a, bound, out, params_only);
      if (fresh) bound.erase(f.name);
      break;
    }
    case FormulaKind::Macro:
      for (const auto& t : f.args) add_term(t);
      break;
  }
}
}  // namespace

std::set<std::string> free_names(const Formula& f) {
  std::set<std::string> bound, out;
  collect(f, bound, out, false);
  return out;
}

std::set<std::string> parameters(const Formula& f) {
  std::set<std::string> bound, out;
  collect(f, bound, out, true);
  return out;
}

std::set<std::string> called_macros(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind == FormulaKind::Macro) out.insert(g.name);
    if (g.a) walk(*g.a);
    if (g.b) walk(*g.b);
  };
  walk(f);
  return out;
}

int depth(const Formula& f) {
  int d = 0;
  if (f.a) d = std::max(d, depth(*f.a));
  if (f.b) d = std::max(d, depth(*f.b));
  return d + 1;
}

}  // namespace stablegl::fol
