#include "stablegl/frobenius.hpp"

#include <cassert>

#include "stablegl/error.hpp"

namespace stablegl {

Poly local_min_poly(const Dense& m, std::span<const Code> v) {
  const Field& field = m.field();
  const FieldSpec& f = *field;
  const std::size_t r = v.size();
  struct Reduced {
    std::vector<Code> w;
    std::size_t pivot;
    Poly combo;
  };
  std::vector<Reduced> basis;
  std::vector<Code> y(v.begin(), v.end());
  for (int j = 0;; ++j) {
    Poly combo = Poly::monomial(field, j);
    std::vector<Code> z = y;
    for (const auto& b : basis) {
      const Code c = z[b.pivot];
      if (!c) continue;
      const Code factor = f.div(c, b.w[b.pivot]);
      for (std::size_t i = 0; i < r; ++i) z[i] ^= f.mul(factor, b.w[i]);
      combo = combo + b.combo.scaled(factor);
    }
    std::size_t pivot = r;
    for (std::size_t i = 0; i < r; ++i)
      if (z[i]) {
        pivot = i;
        break;
      }
    if (pivot == r) return combo;  // combo(m) v = 0 with leading term lambda^j
    basis.push_back({std::move(z), pivot, std::move(combo)});
    y = m.apply(y);
  }
}

namespace {

// Given mu_u = fu and mu_w = fw, returns a vector whose local minimal
// polynomial is lcm(fu, fw), via a coprime split of the lcm.
std::vector<Code> combine(const Dense& m, std::span<const Code> u, const Poly& fu,
                          std::span<const Code> w, const Poly& fw) {
  Poly fp = fu;
  Poly hp = fw / gcd(fu, fw);
  for (;;) {
    Poly c = gcd(fp, hp);
    if (c.degree() <= 0) break;
    fp = fp / c;
    hp = hp * c;
  }
  auto u2 = eval_poly_on(fu / fp, m, u);
  auto w2 = eval_poly_on(fw / hp, m, w);
  for (std::size_t i = 0; i < u2.size(); ++i) u2[i] ^= w2[i];
  return u2;
}

struct Block {
  Poly factor;
  std::vector<std::vector<Code>> vectors;
};

std::vector<Block> decompose(const Dense& m) {
  const int r = m.rows();
  if (r == 0) return {};
  const Field& field = m.field();
  const FieldSpec& f = *field;
  auto u = maximal_vector(m);
  Poly mu = local_min_poly(m, u);
  const int d = mu.degree();

  std::vector<std::vector<Code>> krylov;
  krylov.push_back(u);
  for (int i = 1; i < d; ++i) krylov.push_back(m.apply(krylov.back()));

  std::vector<Block> out;
  out.push_back({mu, krylov});
  if (d == r) return out;

  // Functional with value 1 on m^(d-1) u and 0 on the lower Krylov vectors.
  Dense kt(field, d, r);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < r; ++j) kt.at(i, j) = krylov[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  std::vector<Code> rhs(static_cast<std::size_t>(d), 0);
  rhs.back() = 1;
  auto functional = solve(kt, rhs);
  assert(functional);

  // Rows f, f m, ..., f m^(d-1); their common kernel is an invariant complement.
  Dense phi(field, d, r);
  std::vector<Code> row = *functional;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < r; ++j) phi.at(i, j) = row[static_cast<std::size_t>(j)];
    std::vector<Code> next(static_cast<std::size_t>(r), 0);
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) next[static_cast<std::size_t>(j)] ^= f.mul(row[static_cast<std::size_t>(k)], m.at(k, j));
    row = std::move(next);
  }
  const Dense complement = nullspace(phi);
  const int c = complement.cols();
  assert(c == r - d);

  Dense restricted(field, c, c);
  for (int j = 0; j < c; ++j) {
    auto image = m.apply(complement.column(j));
    auto coords = solve(complement, image);
    assert(coords);
    restricted.set_column(j, *coords);
  }
  for (auto& b : decompose(restricted)) {
    Block mapped{b.factor, {}};
    for (const auto& v : b.vectors) mapped.vectors.push_back(complement.apply(v));
    out.push_back(std::move(mapped));
  }
  return out;
}

}  // namespace

std::vector<Code> maximal_vector(const Dense& m) {
  const int r = m.rows();
  std::vector<Code> u(static_cast<std::size_t>(r), 0);
  if (r == 0) return u;
  u[0] = 1;
  Poly mu = local_min_poly(m, u);
  for (int i = 1; i < r; ++i) {
    std::vector<Code> e(static_cast<std::size_t>(r), 0);
    e[static_cast<std::size_t>(i)] = 1;
    Poly h = local_min_poly(m, e);
    if ((mu % h).is_zero()) continue;
    u = combine(m, u, mu, e, h);
    mu = local_min_poly(m, u);
  }
  return u;
}

Poly minimal_polynomial(const Dense& m) {
  if (m.rows() == 0) return Poly::constant(m.field(), 1);
  return local_min_poly(m, maximal_vector(m));
}

FrobeniusForm frobenius_form(const Dense& m) {
  if (m.rows() != m.cols()) throw Error("rational canonical form of a non-square matrix");
  const int n = m.rows();
  auto blocks = decompose(m);
  FrobeniusForm out{{}, Dense(m.field(), n, n), Dense(m.field(), n, n)};
  int col = 0;
  for (const auto& b : blocks) {
    out.invariant_factors.push_back(b.factor);
    const Dense c = companion(b.factor);
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j) out.form.at(col + i, col + j) = c.at(i, j);
    for (const auto& v : b.vectors) out.basis.set_column(col++, v);
  }
  return out;
}

std::optional<Conjugator> similar(const StableMatrix& a, const StableMatrix& b) {
  require_same_field(a.field(), b.field());
  const int n = std::max(a.support(), b.support());
  if (n == 0) return Conjugator{identity(a.field()), a, b};
  const auto fa = frobenius_form(a.embed(n));
  const auto fb = frobenius_form(b.embed(n));
  if (fa.invariant_factors != fb.invariant_factors) return std::nullopt;
  // a = Pa F Pa^-1, b = Pb F Pb^-1  =>  a = (Pa Pb^-1) b (Pa Pb^-1)^-1.
  const Dense u = fa.basis * inverse(fb.basis);
  Conjugator cert{StableMatrix::from_dense(u), a, b};
  assert(cert.verify());
  return cert;
}

std::string stable_class_key(const StableMatrix& a) {
  const int n = a.support();
  std::string key = "F";
  if (n == 0) return key;
  const auto form = frobenius_form(a.embed(2 * n));
  const Poly tail = Poly::linear(a.field(), 1);
  for (const auto& p : form.invariant_factors) {
    if (p == tail) continue;
    key += '|';
    for (Code c : p.coeffs()) {
      key += std::to_string(c);
      key += ',';
    }
  }
  return key;
}

}  // namespace stablegl
