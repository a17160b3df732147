#pragma once

// Shared helpers for the unit suites: seeded generators and brute-force
// oracles that stay independent of the library's algorithms.

#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>
#include <vector>

#include "stablegl/centralizer.hpp"
#include "stablegl/dense.hpp"
#include "stablegl/field.hpp"
#include "stablegl/stable_matrix.hpp"

namespace stablegl::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed5eedULL);
  return gen;
}

inline Dense random_dense(const Field& f, int n) {
  std::uniform_int_distribution<unsigned> d(0, f->order() - 1);
  Dense m(f, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = static_cast<Code>(d(rng()));
  return m;
}

inline StableMatrix random_invertible(const Field& f, int n) {
  for (;;) {
    Dense m = random_dense(f, n);
    if (determinant(m) != 0) return StableMatrix::from_dense(m);
  }
}

// Decodes index into an n x n matrix with base-q digits, row-major.
inline Dense dense_from_index(const Field& f, int n, unsigned long long index) {
  Dense m(f, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.at(i, j) = static_cast<Code>(index % f->order());
      index /= f->order();
    }
  return m;
}

inline unsigned long long ipow(unsigned long long b, int e) {
  unsigned long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Every element of GL_n(F), by scanning all q^(n^2) matrices.
inline std::vector<StableMatrix> all_invertible(const Field& f, int n) {
  std::vector<StableMatrix> out;
  const unsigned long long total = ipow(f->order(), n * n);
  for (unsigned long long idx = 0; idx < total; ++idx) {
    Dense m = dense_from_index(f, n, idx);
    if (determinant(m) != 0) out.push_back(StableMatrix::from_dense(m));
  }
  return out;
}

// Field-element product computed by schoolbook carry-less multiplication,
// independent of the log/exp tables.
inline Code slow_mul(const FieldSpec& f, Code a, Code b) {
  return static_cast<Code>(clmul_mod(a, b, f.modulus()));
}

// det(lambda I - m) by Laplace expansion over polynomial entries.
inline Poly laplace_char_poly(const Dense& m) {
  const Field& f = m.field();
  const int n = m.rows();
  std::vector<std::vector<Poly>> entries(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      entries[static_cast<std::size_t>(i)].push_back(
          i == j ? Poly::linear(f, m.at(i, j)) : Poly::constant(f, m.at(i, j)));
  std::function<Poly(std::vector<int>, int)> rec = [&](std::vector<int> cols, int row) -> Poly {
    if (cols.empty()) return Poly::constant(f, 1);
    Poly acc(f);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      auto rest = cols;
      rest.erase(rest.begin() + static_cast<long>(c));
      acc = acc + entries[static_cast<std::size_t>(row)][static_cast<std::size_t>(cols[c])] * rec(rest, row + 1);
    }
    return acc;  // signs vanish in characteristic 2
  };
  std::vector<int> cols(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cols[static_cast<std::size_t>(i)] = i;
  return rec(cols, 0);
}

// The conjugacy orbit of a under every u in `group`.
inline std::set<StableMatrix> orbit(const StableMatrix& a, const std::vector<StableMatrix>& group) {
  std::set<StableMatrix> out;
  for (const auto& u : group) out.insert(conjugate(a, u));
  return out;
}

// Generators of GL_n(F): adjacent transvections I + c E_ij, |i - j| = 1, with
// c over the additive basis 1, x, x^2, ... (their commutators give every other
// transvection), plus diag(g, 1, ..., 1) for a generator g of F*.
inline std::vector<StableMatrix> gl_generators(const Field& f, int n) {
  std::vector<StableMatrix> gens;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i - j != 1 && j - i != 1) continue;
      for (int b = 0; b < f->degree(); ++b) {
        Dense m = Dense::identity(f, n);
        m.at(i, j) = static_cast<Code>(1u << b);
        gens.push_back(StableMatrix::from_dense(m));
      }
    }
  // Any element of multiplicative order q - 1 generates F*.
  for (unsigned g = 2; f->order() > 2 && g < f->order(); ++g) {
    Code c = static_cast<Code>(g);
    unsigned ord = 1;
    for (Code p = c; p != 1; p = f->mul(p, c)) ++ord;
    if (ord == f->order() - 1) {
      Dense m = Dense::identity(f, n);
      m.at(0, 0) = c;
      gens.push_back(StableMatrix::from_dense(m));
      break;
    }
  }
  return gens;
}

// Union-find labels of simultaneous-conjugacy orbits of `pairs` under the
// group generated by `gens`. The pair set must be closed under conjugation.
using MatrixPair = std::pair<StableMatrix, StableMatrix>;
inline std::vector<int> pair_orbits(const std::vector<MatrixPair>& pairs,
                                    const std::vector<StableMatrix>& gens) {
  struct PairHash {
    std::size_t operator()(const MatrixPair& p) const { return p.first.hash() * 31 + p.second.hash(); }
  };
  std::unordered_map<MatrixPair, int, PairHash> index;
  for (std::size_t i = 0; i < pairs.size(); ++i) index.emplace(pairs[i], static_cast<int>(i));
  std::vector<StableMatrix> inverses;
  for (const auto& g : gens) inverses.push_back(inverse(g));
  std::vector<int> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x)
      x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (std::size_t g = 0; g < gens.size(); ++g) {
      const MatrixPair c{gens[g] * pairs[i].first * inverses[g], gens[g] * pairs[i].second * inverses[g]};
      const int j = index.at(c);
      parent[static_cast<std::size_t>(find(static_cast<int>(i)))] = find(j);
    }
  std::vector<int> label(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) label[i] = find(static_cast<int>(i));
  return label;
}

// All (a, b) with a, b in `elems` (the order-3 elements of GL_n) commuting,
// found by scanning the centralizer of each a.
inline std::vector<MatrixPair> commuting_order3_pairs(const Field& f, int n,
                                                      const std::vector<StableMatrix>& elems) {
  std::vector<MatrixPair> out;
  const Dense zero(f, n, n);
  const StableMatrix e = identity(f);
  for (const auto& a : elems) {
    const auto basis = centralizer_basis(f, {a}, n);
    const unsigned long long total = ipow(f->order(), static_cast<int>(basis.size()));
    for (unsigned long long idx = 0; idx < total; ++idx) {
      const Dense x = span_element(basis, zero, idx);
      if (determinant(x) == 0) continue;
      StableMatrix b = StableMatrix::from_dense(x);
      if (power(b, 3) == e) out.emplace_back(a, std::move(b));
    }
  }
  return out;
}

}  // namespace stablegl::testing
