#include <map>

#include "doctest.h"
#include "stablegl/centralizer.hpp"
#include "stablegl/error.hpp"
#include "stablegl/frobenius.hpp"
#include "stablegl/stable_matrix.hpp"
#include "support.hpp"

using namespace stablegl;
namespace t = stablegl::testing;

namespace {
Field gf2() { return field_make(1); }
Field gf4() { return field_make(2); }
}  // namespace

TEST_CASE("diag constructors and trimming") {
  auto f = gf4();
  const Code xi = f->xi(), xi2 = f->mul(xi, xi);
  CHECK(diag(f, {}).support() == 0);
  CHECK(diag(f, {}) == identity(f));
  CHECK(diag(f, {xi, xi2}).support() == 2);
  CHECK(diag(f, {1, 1}) == identity(f));
  CHECK(diag(f, {xi, 1, 1}).support() == 1);
  CHECK(diag(f, {1, 1, xi}).support() == 3);
}

TEST_CASE("T, G_k and D_k") {
  auto f = gf2();
  auto t = t_block(f);
  CHECK(t.to_string() == "over gf(2); [[1,1],[1,0]]");
  CHECK((t * t).rows_string() == "[[0,1],[1,1]]");
  CHECK(power(t, 3) == identity(f));
  CHECK(g_k(f, 1) == d_k(f, 1));
  CHECK(g_k(f, 3).support() == 4);
  CHECK(d_k(f, 2).support() == 4);
  CHECK(d_k(f, 2).rows_string() == "[[1,1,0,0],[1,0,0,0],[0,0,1,1],[0,0,1,0]]");
  CHECK(d_k(f, 0) == identity(f));
}

TEST_CASE("products, inverse, order") {
  auto f = gf4();
  const Code xi = f->xi();
  CHECK(diag(f, {1, 1, xi, xi}) * diag(f, {xi, xi, 1, 1}) == diag(f, {xi, xi, xi, xi}));
  CHECK(order(t_block(f), 10) == 3);
  CHECK(order(identity(f), 10) == 1);
  CHECK(order(diag(f, {xi}), 2) == std::nullopt);
  auto u = t::random_invertible(f, 4);
  CHECK(u * inverse(u) == identity(f));
  CHECK_THROWS_AS(inverse(StableMatrix::from_dense(Dense(f, 2, 2))), SingularMatrix);
  CHECK_THROWS_AS(t_block(f) * t_block(gf2()), FieldMismatch);
}

TEST_CASE("embedding commutes with multiplication (exhaustive GF(2), n <= 3, m <= 5)") {
  auto f = gf2();
  std::vector<Dense> all;
  for (unsigned long long i = 0; i < 512; ++i) all.push_back(t::dense_from_index(f, 3, i));
  for (const auto& a : all) {
    const auto sa = StableMatrix::from_dense(a);
    for (int m = 3; m <= 5; ++m) REQUIRE(StableMatrix::from_dense(sa.embed(m)) == sa);
    for (std::size_t j = 0; j < all.size(); j += 7) {
      const auto sb = StableMatrix::from_dense(all[j]);
      const auto prod = sa * sb;
      for (int m = 3; m <= 5; ++m)
        REQUIRE(StableMatrix::from_dense(sa.embed(m) * sb.embed(m)) == prod);
    }
  }
}

TEST_CASE("similar: certificates for T and its powers") {
  auto f = gf4();
  const Code xi = f->xi(), xi2 = f->mul(xi, xi);
  auto cert = similar(diag(f, {xi, xi2}), t_block(f));
  REQUIRE(cert);
  CHECK(cert->verify());
  CHECK(conjugate(t_block(f), cert->u) == diag(f, {xi, xi2}));

  auto g = gf2();
  auto t2 = t_block(g) * t_block(g);
  auto c2 = similar(t_block(g), t2);
  REQUIRE(c2);
  CHECK(c2->verify());

  CHECK_FALSE(similar(diag(f, {xi}), diag(f, {xi2})));
  // Brute force over GL_1 and GL_2 completions.
  for (int n = 1; n <= 2; ++n)
    for (const auto& u : t::all_invertible(f, n))
      CHECK(conjugate(diag(f, {xi2}), u) != diag(f, {xi}));
}

TEST_CASE("similar agrees with brute-force conjugacy orbits") {
  struct Case {
    Field f;
    int n;
  };
  for (const auto& c : {Case{gf2(), 3}, Case{gf4(), 2}}) {
    const auto group = t::all_invertible(c.f, c.n);
    std::map<StableMatrix, int> class_of;
    int next = 0;
    for (const auto& a : group) {
      if (class_of.count(a)) continue;
      for (const auto& b : t::orbit(a, group)) class_of[b] = next;
      ++next;
    }
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = 0; j < group.size(); j += (c.n == 3 ? 1 : 3)) {
        const auto& a = group[i];
        const auto& b = group[j];
        auto cert = similar(a, b);
        REQUIRE((cert.has_value()) == (class_of[a] == class_of[b]));
        if (cert) REQUIRE(cert->verify());
        REQUIRE((stable_class_key(a) == stable_class_key(b)) == cert.has_value());
      }
  }
}

TEST_CASE("similar is an equivalence relation with composable certificates") {
  auto f = gf4();
  for (int trial = 0; trial < 40; ++trial) {
    auto a = t::random_invertible(f, 1 + trial % 4);
    auto u = t::random_invertible(f, 4);
    auto v = t::random_invertible(f, 5);
    auto b = conjugate(a, u);
    auto c = conjugate(b, v);
    auto refl = similar(a, a);
    REQUIRE(refl);
    CHECK(refl->verify());
    auto ab = similar(a, b);
    auto bc = similar(b, c);
    REQUIRE(ab);
    REQUIRE(bc);
    CHECK(ab->inverted().verify());
    CHECK(ab->then(*bc).verify());
    auto ac = similar(a, c);
    REQUIRE(ac);
    CHECK(ac->verify());
  }
  CHECK(Conjugator{identity(f), t_block(f), t_block(f)}.verify());
}

TEST_CASE("rational canonical form invariants") {
  auto& gen = t::rng();
  for (int k : {1, 2, 3}) {
    auto f = field_make(k);
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 1 + static_cast<int>(gen() % 6);
      Dense m = t::random_dense(f, n);
      // Sprinkle in structured (non-cyclic) matrices.
      if (trial % 3 == 0) m = StableMatrix::from_dense(Dense::identity(f, n)).embed(n) +
                              (trial % 2 ? Dense(f, n, n) : m * m);
      const auto form = frobenius_form(m);
      CHECK(inverse(form.basis) * m * form.basis == form.form);
      Poly prod = Poly::constant(f, 1);
      for (std::size_t i = 0; i < form.invariant_factors.size(); ++i) {
        prod = prod * form.invariant_factors[i];
        if (i > 0)
          CHECK((form.invariant_factors[i - 1] % form.invariant_factors[i]).is_zero());
      }
      const Poly cp = char_poly_hessenberg(m);
      CHECK(prod == cp);
      if (n <= 5) CHECK(cp == t::laplace_char_poly(m));
      const Poly mp = minimal_polynomial(m);
      CHECK(eval_poly(mp, m).is_zero());
      CHECK((cp % mp).is_zero());
      // No annihilator of smaller degree: I, m, ..., m^(d-1) are independent.
      Dense powers(f, mp.degree(), n * n);
      Dense p = Dense::identity(f, n);
      for (int d = 0; d < mp.degree(); ++d) {
        for (int i = 0; i < n * n; ++i) powers.at(d, i) = p.data()[static_cast<std::size_t>(i)];
        p = p * m;
      }
      CHECK(rank(powers) == mp.degree());
    }
  }
}

TEST_CASE("char_poly and min_poly examples") {
  auto f = gf4();
  const Code xi = f->xi(), xi2 = f->mul(xi, xi);
  CHECK(char_poly(t_block(f), 2) == Poly(f, {1, 1, 1}));
  CHECK(char_poly(t_block(f), 2).to_string() == "lambda^2 + lambda + 1");
  const Poly l1 = Poly::linear(f, 1);
  CHECK(char_poly(identity(f), 3) == l1 * l1 * l1);
  const Poly expected = Poly::linear(f, xi) * Poly::linear(f, xi2);
  auto a = diag(f, {xi, xi2});
  CHECK(min_poly(a, 2) == expected);
  CHECK(eval_poly(expected, a.embed(2)).is_zero());
  for (Code c = 0; c < 4; ++c) CHECK_FALSE(eval_poly(Poly::linear(f, c), a.embed(2)).is_zero());
  // Above the support the identity tail contributes (lambda + 1).
  CHECK(min_poly(a, 3) == expected * l1);
  CHECK(min_poly(a, 5) == min_poly(a, 3));
  CHECK_THROWS_AS(char_poly(d_k(f, 2), 3), SupportTooSmall);
}

TEST_CASE("stable class key ignores padding and conjugation") {
  auto f = gf4();
  for (int trial = 0; trial < 40; ++trial) {
    auto a = t::random_invertible(f, 1 + trial % 4);
    auto u = t::random_invertible(f, 6);
    CHECK(stable_class_key(a) == stable_class_key(conjugate(a, u)));
  }
  CHECK(stable_class_key(identity(f)) == "F");
  CHECK(stable_class_key(diag(f, {1, 1, f->xi()})) == stable_class_key(diag(f, {f->xi()})));
}

TEST_CASE("minimal support") {
  auto f = gf4();
  CHECK(minimal_support(diag(f, {1, 1, f->xi()})) == 1);
  CHECK(minimal_support(StableMatrix::from_rows(f, {{1, 1}, {0, 1}})) == 2);
  CHECK(minimal_support(identity(f)) == 0);
  CHECK(minimal_support(d_k(f, 3)) == 6);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = t::random_invertible(f, 1 + trial % 3);
    auto b = conjugate(a, t::random_invertible(f, 5));
    CHECK(minimal_support(a) == minimal_support(b));
  }
}

TEST_CASE("matrix literals") {
  auto m = parse_matrix("over gf(4); [[1,0,0],[0,x,0],[0,0,x+1]]");
  CHECK(m == diag(field_make(2), {1, 2, 3}));
  CHECK(m.to_string() == "over gf(4); [[1,0,0],[0,2,0],[0,0,3]]");
  CHECK(parse_matrix(m.to_string()) == m);
  CHECK(parse_matrix("over gf(4); []") == identity(field_make(2)));
  CHECK(parse_matrix("over gf(2); [[1,0],[0,1]]").support() == 0);
  CHECK_THROWS(parse_matrix("gf(4); [[1]]"));
  CHECK_THROWS(parse_matrix("over gf(4); [[1,0],[0]]"));
  for (int trial = 0; trial < 20; ++trial) {
    auto a = t::random_invertible(gf4(), 1 + trial % 4);
    CHECK(parse_matrix(a.to_string()) == a);
  }
}

namespace {
// Rank by column elimination on the transpose, kept separate from rref().
int column_rank(const Dense& m) {
  Dense a = m.transpose();
  const FieldSpec& f = *a.field();
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int p = r;
    while (p < a.rows() && !a.at(p, c)) ++p;
    if (p == a.rows()) continue;
    for (int j = 0; j < a.cols(); ++j) std::swap(a.at(p, j), a.at(r, j));
    for (int i = r + 1; i < a.rows(); ++i) {
      const Code factor = f.div(a.at(i, c), a.at(r, c));
      if (!factor) continue;
      for (int j = 0; j < a.cols(); ++j) a.at(i, j) ^= f.mul(factor, a.at(r, j));
    }
    ++r;
  }
  return r;
}
}  // namespace

TEST_CASE("centralizer examples") {
  auto f = gf2();
  auto b1 = centralizer_basis(f, {g_k(f, 1)}, 4);
  CHECK(b1.size() == 6);
  CHECK(centralizer_basis(f, {}, 2).size() == 4);
  std::vector<StableMatrix> gens{g_k(f, 3), g_k(f, 4), g_k(f, 5), g_k(f, 6)};
  auto b2 = centralizer_basis(f, gens, 7);
  CHECK(b2.size() == 5);
  for (const auto& m : b2) {
    // diag[M0, a I]: zero off the two diagonal blocks, constant diagonal below.
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) {
        if (i < 2 && j < 2) continue;
        if (i == j && i >= 2)
          CHECK(m.at(i, j) == m.at(2, 2));
        else
          CHECK(m.at(i, j) == 0);
      }
  }
  CHECK_THROWS_AS(centralizer_basis(f, {g_k(f, 4)}, 4), SupportTooSmall);
}

TEST_CASE("centralizer basis solves the system with the expected dimension") {
  auto& gen = t::rng();
  for (int k : {1, 2, 3}) {
    auto f = field_make(k);
    for (int trial = 0; trial < 12; ++trial) {
      const int m = 2 + static_cast<int>(gen() % 4);
      std::vector<StableMatrix> gens;
      for (int g = 0; g < 1 + trial % 3; ++g) gens.push_back(t::random_invertible(f, 1 + static_cast<int>(gen() % m)));
      if (trial % 4 == 0) gens = {g_k(f, 1 + static_cast<int>(gen() % (m - 1)))};
      auto basis = centralizer_basis(f, gens, m);
      for (const auto& x : basis)
        for (const auto& g : gens) REQUIRE(x * g.embed(m) == g.embed(m) * x);
      Dense stacked(f, static_cast<int>(basis.size()), m * m);
      for (std::size_t b = 0; b < basis.size(); ++b)
        for (int i = 0; i < m * m; ++i) stacked.at(static_cast<int>(b), i) = basis[b].data()[static_cast<std::size_t>(i)];
      CHECK(column_rank(stacked) == static_cast<int>(basis.size()));
      CHECK(static_cast<int>(basis.size()) == m * m - column_rank(commutation_system(f, gens, m)));
    }
  }
}

TEST_CASE("stable centralizer forces the identity tail") {
  for (int k : {1, 2}) {
    auto f = field_make(k);
    const int m = 6;
    std::vector<StableMatrix> gens;
    for (int j = 3; j <= m; ++j) gens.push_back(g_k(f, j));
    auto sol = stable_centralizer(f, gens, m);
    REQUIRE(sol);
    CHECK(sol->directions.size() == 4);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i >= 2 || j >= 2) CHECK(sol->particular.at(i, j) == (i == j ? 1 : 0));
    for (const auto& d : sol->directions)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (i >= 2 || j >= 2) CHECK(d.at(i, j) == 0);
  }
}
