#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "doctest.h"
#include "stablegl/error.hpp"
#include "stablegl/folang/domains.hpp"
#include "stablegl/folang/eval.hpp"
#include "stablegl/folang/macros.hpp"
#include "stablegl/folang/parser.hpp"
#include "formula_gen.hpp"
#include "support.hpp"

using namespace stablegl;
using namespace stablegl::fol;
namespace t = stablegl::testing;

namespace {

Field gf(int k) { return field_make(k); }

EvalOptions at(int n) {
  EvalOptions o;
  o.witness_bound = n;
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "cannot open " << path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Replaces every parameter `from` by `to` inside the arguments of calls to
// `macro`.
TermPtr rename_param(const TermPtr& t, const std::string& from, const std::string& to) {
  switch (t->kind) {
    case TermKind::Param:
      return t->name == from ? param(to) : t;
    case TermKind::Product:
      return product(rename_param(t->left, from, to), rename_param(t->right, from, to));
    case TermKind::Inverse:
      return inverse(rename_param(t->left, from, to));
    case TermKind::Power:
      return power(rename_param(t->left, from, to), t->exponent);
    default:
      return t;
  }
}

FormulaPtr rename_in_calls(const FormulaPtr& f, const std::string& macro, const std::string& from,
                           const std::string& to) {
  auto rec = [&](const FormulaPtr& g) { return rename_in_calls(g, macro, from, to); };
  switch (f->kind) {
    case FormulaKind::Macro: {
      if (f->name != macro) return f;
      std::vector<TermPtr> args;
      for (const auto& a : f->args) args.push_back(rename_param(a, from, to));
      return macro_call(f->name, args);
    }
    case FormulaKind::Not:
      return negation(rec(f->a));
    case FormulaKind::And:
      return conjunction(rec(f->a), rec(f->b));
    case FormulaKind::Or:
      return disjunction(rec(f->a), rec(f->b));
    case FormulaKind::Implies:
      return implication(rec(f->a), rec(f->b));
    case FormulaKind::Exists:
      return exists(f->name, f->domain, rec(f->a));
    case FormulaKind::Forall:
      return forall(f->name, f->domain, rec(f->a));
    default:
      return f;
  }
}

Bindings theta_params(const Field& f) {
  const Code xi = f->xi(), xi2 = f->mul(xi, xi);
  return {{"A", diag(f, {xi})}, {"X1", diag(f, {xi, 1})}, {"X2", diag(f, {1, xi})}, {"B", diag(f, {xi, xi2})}};
}

Bindings conjugated(const Bindings& b, const StableMatrix& v) {
  Bindings out;
  for (const auto& [k, m] : b) out.emplace(k, conjugate(m, v));
  return out;
}

Bindings with(Bindings b, const std::string& name, const StableMatrix& m) {
  b.insert_or_assign(name, m);
  return b;
}

}  // namespace

TEST_CASE("parse examples") {
  auto f = parse("A^3 = E & !(A = E)");
  auto expect = conjunction(equal_atom(power(param("A"), 3), identity_term()),
                            negation(equal_atom(param("A"), identity_term())));
  CHECK(equal(*f, *expect));

  auto g = parse("exists X in conj(A) @N: X ~ A");
  REQUIRE(g->kind == FormulaKind::Exists);
  CHECK(g->domain.kind == Domain::Kind::Conj);
  CHECK(!g->domain.bound);
  CHECK(!g->domain.uptoconj);
  CHECK(equal(*g->a, *conj_atom(var("X"), param("A"))));

  auto h = parse("forall Z in commconj(A, B^-1) @7 uptoconj: Z A B != E | phi(Z A)");
  REQUIRE(h->kind == FormulaKind::Forall);
  CHECK(h->domain.kind == Domain::Kind::CommConj);
  CHECK(h->domain.bound == 7);
  CHECK(h->domain.uptoconj);
  CHECK(equal(*h->domain.with, *inverse(param("B"))));
  CHECK(h->a->kind == FormulaKind::Or);

  CHECK(equal(*parse_term("A^0"), *identity_term()));
  CHECK(equal(*parse_term("A B C"), *product(product(param("A"), param("B")), param("C"))));
  CHECK(print(*product(param("A"), product(param("B"), param("C")))) == "A (B C)");
  CHECK(equal(*parse("A = E -> B = E -> C = E"), *parse("A = E -> (B = E -> C = E)")));
  CHECK(equal(*parse("A = E | B = E & C = E"), *parse("A = E | (B = E & C = E)")));
  CHECK(print(*parse("(A B)^2 C^-1 = E")) == "(A B)^2 C^-1 = E");
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse("A ~");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 4);
    CHECK(!e.expected().empty());
  }
  try {
    parse("A = E &\n  exists X in nowhere @N: X = E");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 15);
  }
  CHECK_THROWS_AS(parse("exists X in group: X = E"), SyntaxError);
  CHECK_THROWS_AS(parse("A = "), SyntaxError);
  CHECK_THROWS_AS(parse("phi(A, B)"), SyntaxError);
  CHECK_THROWS_AS(parse("frobnicate(A)"), UnknownMacro);
  CHECK_THROWS_AS(builtin("chi", Variant::Corrected), UnknownName);
}

TEST_CASE("shipped formula files parse to the builtins") {
  const std::string dir = STABLEGL_FORMULA_DIR;
  int files = 0;
  for (const auto& name : builtin_list())
    for (auto v : {Variant::Literal, Variant::Corrected}) {
      const std::string text = read_file(dir + "/" + builtin_file(name, v));
      CHECK(text == builtin_source(name, v));
      const auto def = parse_definition(text);
      CHECK(def.name == name);
      CHECK(equal(*def.body, *builtin(name, v)));
      CHECK(equal(*parse(print(*builtin(name, v))), *builtin(name, v)));
      ++files;
    }
  CHECK(files == 14);
  CHECK(builtin_file("theta", Variant::Literal) == "theta.literal.fol");
  CHECK(builtin_file("phi", Variant::Literal) == "phi.fol");
}

TEST_CASE("random formulas round-trip through print and parse") {
  t::FormulaGen gen;
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    auto f = gen.formula({}, 1 + i % 5);
    CHECK(depth(*f) <= 5);
    const std::string text = print(*f);
    auto g = parse(text);
    if (!equal(*f, *g)) FAIL_CHECK("round trip changed " << text << " into " << print(*g));
    CHECK(print(*g) == text);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("variants differ exactly by the two repairs") {
  auto theta_lit = builtin("theta", Variant::Literal);
  auto theta_cor = builtin("theta", Variant::Corrected);
  CHECK(!equal(*theta_lit, *theta_cor));
  CHECK(equal(*rename_in_calls(theta_lit, "phi", "B", "C"), *theta_cor));

  auto psi_lit = builtin("psi", Variant::Literal);
  auto psi_cor = builtin("psi", Variant::Corrected);
  CHECK(equal(*psi_cor, *conjunction(psi_lit, negation(equal_atom(param("B"), identity_term())))));

  for (const auto& name : builtin_list())
    if (!varies_by_variant(name))
      CHECK(equal(*builtin(name, Variant::Literal), *builtin(name, Variant::Corrected)));
  CHECK(parameters(*psi_cor) == std::set<std::string>{"A", "B"});
  CHECK(called_macros(*builtin("gamma", Variant::Corrected)) == std::set<std::string>{"theta"});
}

TEST_CASE("macro registry rejects recursion and redefinition") {
  MacroRegistry r;
  r.define({"one", {"P"}, parse("P = E", &r)});
  CHECK_THROWS_AS(r.define({"one", {"P"}, parse("P = E", &r)}), Error);
  CHECK_THROWS_AS(parse("two(P)", &r), UnknownMacro);
  CHECK_THROWS_AS(r.define({"two", {"P"}, macro_call("two", {param("P")})}), Error);
  r.define({"two", {"P"}, parse("one(P P)", &r)});
  CHECK(r.arity("two") == 1);
  auto f = gf(1);
  EvalOptions o = at(2);
  o.macros = &r;
  CHECK(eval("two(A)", f, {{"A", t_block(f)}}, o).value == false);
  CHECK(eval("two(A)", f, {{"A", StableMatrix::from_rows(f, {{1, 1}, {0, 1}})}}, o).value);
}

TEST_CASE("phi examples") {
  auto f = gf(2);
  const Code xi = f->xi(), xi2 = f->mul(xi, xi);
  auto phi = builtin("phi", Variant::Corrected);

  auto r = eval(*phi, f, {{"A", diag(f, {xi})}}, at(6));
  CHECK(r.value);
  CHECK(r.witness_bound == 6);
  REQUIRE(r.witnesses.size() == 4);
  std::set<Order3Signature> classes;
  classes.insert(canonicalize_order3(r.witnesses[0].second * r.witnesses[1].second).signature);
  classes.insert(canonicalize_order3(r.witnesses[2].second * r.witnesses[3].second).signature);
  CHECK(classes == std::set<Order3Signature>{Order3Signature::xi(2, 0), Order3Signature::xi(0, 1)});
  CHECK(verify_assignment(*phi, f, {{"A", diag(f, {xi})}}, r, at(6)));

  for (int k : {1, 2, 3}) CHECK(eval(*phi, gf(k), {{"A", identity(gf(k))}}, at(4)).value == false);
  CHECK(eval(*phi, f, {{"A", diag(f, {xi, xi2})}}, at(8)).value == false);
  CHECK(eval(*phi, f, {{"A", diag(f, {xi2})}}, at(8)).value);
  CHECK(default_witness_bound({{"A", diag(f, {xi, xi2})}}) == 8);
}

TEST_CASE("characterize phi and phi_prime") {
  auto f4 = gf(2);
  auto m = characterize(*builtin("phi", Variant::Corrected), f4, 8, signatures_up_to(f4, 3), "A");
  CHECK(m.size() == signatures_up_to(f4, 3).size());
  for (const auto& [s, v] : m)
    CHECK_MESSAGE(v == (s == Order3Signature::xi(1, 0) || s == Order3Signature::xi(0, 1)), to_string(s));

  auto f2 = gf(1);
  std::vector<Order3Signature> ts;
  for (int c = 0; c <= 3; ++c) ts.push_back(Order3Signature::t(c));
  auto mp = characterize(*builtin("phi_prime", Variant::Corrected), f2, 10, ts, "A");
  for (const auto& [s, v] : mp) CHECK_MESSAGE(v == (s == Order3Signature::t(1)), to_string(s));

  // A field without cube roots of unity other than GF(2).
  auto f8 = gf(3);
  auto m8 = characterize(*builtin("phi_prime", Variant::Corrected), f8, 6, {Order3Signature::t(1), Order3Signature::t(2)}, "A");
  CHECK(m8.at(Order3Signature::t(1)));
  CHECK(!m8.at(Order3Signature::t(2)));
}

TEST_CASE("psi literal admits B = E, corrected isolates diag[xi, xi^2]") {
  auto f = gf(2);
  const Code xi = f->xi();
  const Bindings base{{"A", diag(f, {xi})}};
  auto lit = builtin("psi", Variant::Literal);
  auto cor = builtin("psi", Variant::Corrected);

  EvalOptions o = at(6);
  o.variant = Variant::Literal;
  auto r = eval(*lit, f, with(base, "B", identity(f)), o);
  CHECK(r.value);
  REQUIRE(r.witnesses.size() == 2);
  CHECK(r.witnesses[1].second == inverse(r.witnesses[0].second));
  CHECK(verify_assignment(*lit, f, with(base, "B", identity(f)), r, o));
  CHECK(eval(*cor, f, with(base, "B", identity(f)), at(6)).value == false);

  auto sigs = signatures_up_to(f, 3);
  auto mc = characterize(*cor, f, 8, sigs, "B", base);
  auto ml = characterize(*lit, f, 8, sigs, "B", base, o);
  for (const auto& s : sigs) {
    CHECK_MESSAGE(mc.at(s) == (s == Order3Signature::xi(1, 1)), to_string(s));
    CHECK_MESSAGE(ml.at(s) == (s == Order3Signature::xi(1, 1) || s.is_trivial()), to_string(s));
  }
}

TEST_CASE("theta picks out diag[1, 1, T'] with T' of signature (1,1)") {
  auto f = gf(2);
  const Code xi = f->xi(), xi2 = f->mul(xi, xi);
  const Bindings params = theta_params(f);
  auto cor = builtin("theta", Variant::Corrected);
  auto lit = builtin("theta", Variant::Literal);
  EvalOptions lo = at(6);
  lo.variant = Variant::Literal;
  int candidates = 0;
  for (Code c1 : {Code(1), xi, xi2})
    for (Code c2 : {Code(1), xi, xi2})
      for (const auto& s : signatures_up_to(f, 4)) {
        const StableMatrix rest = canonical_matrix(f, s);
        const StableMatrix c = block_diag(f, {diag(f, {c1, c2}).embed(2), rest.embed(rest.support())});
        if (c.support() > 6) continue;
        ++candidates;
        const bool expected = c1 == 1 && c2 == 1 && s == Order3Signature::xi(1, 1);
        CHECK_MESSAGE(eval(*cor, f, with(params, "C", c), at(6)).value == expected, c.to_string());
        CHECK(eval(*lit, f, with(params, "C", c), lo).value == false);
      }
  CHECK(candidates > 50);
}

TEST_CASE("builtins are conjugation invariant") {
  auto f4 = gf(2);
  auto f2 = gf(1);
  const Code xi = f4->xi(), xi2 = f4->mul(xi, xi);
  auto phi = builtin("phi", Variant::Corrected);
  auto phi_p = builtin("phi_prime", Variant::Corrected);
  auto psi = builtin("psi", Variant::Corrected);
  auto theta = builtin("theta", Variant::Corrected);
  auto theta_p = builtin("theta_prime", Variant::Corrected);
  for (int trial = 0; trial < 4; ++trial) {
    const StableMatrix v4 = t::random_invertible(f4, 3);
    for (const auto& a : {diag(f4, {xi}), diag(f4, {xi, xi2}), diag(f4, {xi2, xi2}), diag(f4, {1, xi})}) {
      CHECK(eval(*phi, f4, {{"A", a}}, at(8)).value == eval(*phi, f4, {{"A", conjugate(a, v4)}}, at(8)).value);
      const Bindings b{{"A", diag(f4, {xi})}, {"B", a}};
      CHECK(eval(*psi, f4, b, at(8)).value ==
            eval(*psi, f4, with(b, "B", conjugate(a, v4)), at(8)).value);
    }
    const StableMatrix v2 = t::random_invertible(f2, 3);
    for (int k : {1, 2}) {
      const StableMatrix a = d_k(f2, k);
      CHECK(eval(*phi_p, f2, {{"A", a}}, at(10)).value ==
            eval(*phi_p, f2, {{"A", conjugate(a, v2)}}, at(10)).value);
    }
    // theta and theta_prime carry further parameters, so conjugate all of them.
    const Bindings tp = with(theta_params(f4), "C", diag(f4, {1, 1, xi, xi2}));
    CHECK(eval(*theta, f4, conjugated(tp, v4), at(8)).value);
    const Bindings tq = with(theta_params(f4), "C", diag(f4, {xi, 1, xi, xi2}));
    CHECK(!eval(*theta, f4, conjugated(tq, v4), at(8)).value);
    const Bindings pp{{"X", g_k(f2, 1)}, {"C", g_k(f2, 4)}};
    CHECK(eval(*theta_p, f2, pp, at(8)).value);
    CHECK(eval(*theta_p, f2, conjugated(pp, v2), at(8)).value);
  }
}

TEST_CASE("full enumeration agrees with class-representative evaluation") {
  struct Case {
    int k, n;
    const char* formula;
  };
  auto full = [](int n, bool quantified) {
    EvalOptions o = at(n);
    o.force_full = true;
    o.quantified_conj = quantified;
    return o;
  };
  for (const Case c : {Case{1, 3, "phi"}, Case{1, 3, "phi_prime"}, Case{2, 2, "phi"}, Case{2, 2, "phi_prime"},
                       Case{3, 2, "phi_prime"}}) {
    auto f = gf(c.k);
    auto body = builtin(c.formula, Variant::Corrected);
    for (const auto& s : signatures_up_to(f, c.n)) {
      const Bindings b{{"A", canonical_matrix(f, s)}};
      const auto fast = eval(*body, f, b, at(c.n));
      const auto slow = eval(*body, f, b, full(c.n, false));
      CHECK_MESSAGE(fast.value == slow.value, c.formula << " over " << f->name() << " N=" << c.n << " " << to_string(s));
      CHECK(slow.stats.bindings_visited >= fast.stats.bindings_visited);
    }
  }
  // Quantifier alternation over the whole group; at support 3 the conjugacy
  // atoms are also decided by searching U.
  auto f = gf(1);
  struct Sentence {
    int n;
    const char* text;
  };
  const Sentence sentences[] = {
      {3, "forall X in group @3: exists Y in group @3: X Y = Y X & !(Y = E)"},
      {3, "exists X in order3 @3 uptoconj: forall Y in conj(X) @3: X Y = Y X -> X = Y"},
      {3, "forall X in order3 @3: exists Y in commconj(X, X) @3: X Y ~ X^2 & !(X = Y)"},
      {3, "exists X in group @3 uptoconj: X ~ A & forall Y in conj(A) @3: Y X = X Y -> Y = X"},
      {4, "forall X in order3 @4 uptoconj: exists Y in commconj(X, X) @4 uptoconj: X Y ~ X^2 & !(X = E) | X = E"},
      {4, "exists X in order3 @4 uptoconj: exists Y in commconj(X, X) @4 uptoconj: !(X Y = E) & !(X Y ~ X) & !(Y ~ X Y)"},
      {4, "forall X in conj(A) @4 uptoconj: exists Y in commconj(A, X) @4 uptoconj: X Y ~ E"},
      {4, "forall X in group @4 uptoconj: X X ~ E | exists Y in group @4 uptoconj: Y ~ X Y X^-1 & !(Y X = X Y)"},
  };
  for (const auto& [n, text] : sentences) {
    const Bindings b{{"A", t_block(f)}};
    const bool base = eval(text, f, b, at(n)).value;
    CHECK_MESSAGE(eval(text, f, b, full(n, false)).value == base, text);
    if (n <= 3) CHECK_MESSAGE(eval(text, f, b, full(n, true)).value == base, text);
    EvalOptions plain = at(n);
    plain.solve_equations = false;
    plain.hoist_guards = false;
    CHECK_MESSAGE(eval(text, f, b, plain).value == base, text);
  }
  EvalOptions q = at(2);
  q.quantified_conj = true;
  auto g4 = gf(2);
  CHECK(eval(*builtin("phi", Variant::Corrected), g4, {{"A", diag(g4, {g4->xi()})}}, q).value ==
        eval(*builtin("phi", Variant::Corrected), g4, {{"A", diag(g4, {g4->xi()})}}, at(2)).value);
}

TEST_CASE("witnesses and counterexamples re-verify") {
  auto f = gf(1);
  const char* trues[] = {
      "exists X in order3 @4: exists Y in conj(X) @4: X Y = Y X & !(X = Y) & !(X Y = E)",
      "exists X in group @3: X^2 = E & !(X = E)",
  };
  for (const char* s : trues) {
    auto r = eval(s, f, {}, at(4));
    REQUIRE(r.value);
    CHECK(!r.witnesses.empty());
    CHECK(verify_assignment(*parse(s), f, {}, r, at(4)));
  }
  const char* s = "forall X in order3 @3: X = E | forall Y in conj(X) @3: X Y = Y X";
  auto r = eval(s, f, {}, at(3));
  REQUIRE(!r.value);
  REQUIRE(r.counterexample.size() == 1);
  CHECK(power(r.counterexample[0].second, 3) == identity(f));
  CHECK(verify_assignment(*parse(s), f, {}, r, at(3)));
  // A tampered witness is rejected.
  auto bad = eval(trues[1], f, {}, at(3));
  bad.witnesses[0].second = t_block(f);
  CHECK(!verify_assignment(*parse(trues[1]), f, {}, bad, at(3)));
}

TEST_CASE("verdicts and witnesses do not depend on worker count") {
  auto f = gf(2);
  const Code xi = f->xi();
  auto phi = builtin("phi", Variant::Corrected);
  const char* s = "exists X in order3 @3: exists Y in commconj(X, X) @3: !(X Y = E) & X Y ~ X^2 & !(X ~ Y)";
  for (int workers : {1, 2, 3, 5}) {
    EvalOptions o = at(6);
    o.workers = workers;
    auto base = at(6);
    base.workers = 1;
    auto r = eval(*phi, f, {{"A", diag(f, {xi})}}, o);
    auto r1 = eval(*phi, f, {{"A", diag(f, {xi})}}, base);
    CHECK(r.value == r1.value);
    CHECK(r.witnesses == r1.witnesses);
    o.witness_bound = base.witness_bound = 3;
    auto q = eval(s, gf(1), {}, o);
    auto q1 = eval(s, gf(1), {}, base);
    CHECK(q.value == q1.value);
    CHECK(q.witnesses == q1.witnesses);
  }
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(0) >= 1);
}

TEST_CASE("evaluation errors") {
  auto f = gf(1);
  CHECK_THROWS_AS(eval("A = E", f, {}, at(2)), UnboundParameter);
  CHECK_THROWS_AS(eval("A = E", f, {{"A", g_k(f, 3)}}, at(2)), SupportTooSmall);
  EvalOptions o = at(4);
  o.budget = 1000;
  CHECK_THROWS_AS(eval("forall X in group @4: X X = X X", f, {}, o), BudgetExceeded);
  auto r = eval("A = E", f, {{"A", t_block(f)}});
  CHECK(r.witness_bound == 8);
  CHECK(!r.value);
}

TEST_CASE("domains match brute-force enumeration") {
  struct Case {
    int k, n;
  };
  for (const Case c : {Case{1, 2}, Case{1, 3}, Case{2, 2}, Case{3, 2}}) {
    auto f = gf(c.k);
    const auto group = t::all_invertible(f, c.n);
    CHECK(general_linear_group(f, c.n, 1'000'000).size() == group.size());
    std::set<std::string> keys;
    for (const auto& g : group) keys.insert(fast_class_key(g));
    const auto reps = class_representatives(f, c.n);
    CHECK(reps.size() == keys.size());
    std::set<std::string> rep_keys;
    for (const auto& r : reps) {
      CHECK(r.support() <= c.n);
      rep_keys.insert(fast_class_key(r));
    }
    CHECK(rep_keys == keys);
    for (std::size_t i = 0; i < reps.size(); i += 1 + reps.size() / 6) {
      const auto expect = t::orbit(reps[i], group);
      const auto got = conjugacy_orbit(reps[i], c.n, 1'000'000);
      CHECK(std::set<StableMatrix>(got.begin(), got.end()) == expect);
      for (std::size_t j = 0; j < reps.size(); j += 1 + reps.size() / 4) {
        std::set<StableMatrix> filtered;
        for (const auto& x : expect)
          if (commute(x, reps[j])) filtered.insert(x);
        const auto cc = commuting_conjugates(reps[i], reps[j], c.n, 1'000'000);
        CHECK(std::set<StableMatrix>(cc.begin(), cc.end()) == filtered);
      }
      CHECK(minimal_support(minimal_representative(reps[i])) == minimal_representative(reps[i]).support());
      CHECK(similar(minimal_representative(reps[i]), reps[i]).has_value());
    }
  }
  CHECK(class_representatives(gf(1), 3).size() == 6);
  CHECK(conjugacy_orbit(d_k(gf(1), 2), 3, 1000).empty());
  CHECK(t::ipow(4, 3) == *span_size(*gf(2), 3, 100));
  CHECK(!span_size(*gf(2), 30, 1'000'000));
}

TEST_CASE("gamma_prime picks out the first GL_2 block over GF(2)") {
  auto f = gf(1);
  auto gamma = builtin("gamma_prime", Variant::Corrected);
  const Bindings base{{"X", g_k(f, 1)}};
  for (const auto& m : t::all_invertible(f, 2)) CHECK(eval(*gamma, f, with(base, "M", m), at(6)).value);
  for (const auto& m : {g_k(f, 2), g_k(f, 3), g_k(f, 4), d_k(f, 2),
                        StableMatrix::from_rows(f, {{1, 0, 1}, {0, 1, 0}, {0, 0, 1}})})
    CHECK_MESSAGE(!eval(*gamma, f, with(base, "M", m), at(6)).value, m.to_string());
  CHECK(eval(*builtin("theta_prime", Variant::Corrected), f, {{"X", g_k(f, 1)}, {"C", g_k(f, 4)}}, at(6)).value);
  CHECK(!commute(g_k(f, 3), g_k(f, 4)));
}

TEST_CASE("gamma picks out the first GL_2 block over GF(4)") {
  auto f = gf(2);
  const Code xi = f->xi();
  auto gamma = builtin("gamma", Variant::Corrected);
  const Bindings base = theta_params(f);
  for (const auto& m : {diag(f, {xi}), diag(f, {1, xi}), StableMatrix::from_rows(f, {{1, 1}, {0, 1}}),
                        StableMatrix::from_rows(f, {{0, 1}, {1, 0}}), StableMatrix::from_rows(f, {{xi, 1}, {1, 0}})})
    CHECK_MESSAGE(eval(*gamma, f, with(base, "M", m), at(4)).value, m.to_string());
  for (const auto& m : {diag(f, {1, 1, xi}), g_k(f, 2), g_k(f, 3), diag(f, {xi, xi, xi})})
    CHECK_MESSAGE(!eval(*gamma, f, with(base, "M", m), at(4)).value, m.to_string());
}
