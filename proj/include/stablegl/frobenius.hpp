#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stablegl/dense.hpp"
#include "stablegl/poly.hpp"
#include "stablegl/stable_matrix.hpp"

namespace stablegl {

// Rational canonical form F = basis^-1 * m * basis, F the block-diagonal of
// companion matrices of the invariant factors. invariant_factors[0] is the
// minimal polynomial and each factor divides its predecessor.
struct FrobeniusForm {
  std::vector<Poly> invariant_factors;
  Dense form;
  Dense basis;
};

FrobeniusForm frobenius_form(const Dense& m);

// Monic generator of {p : p(m) v = 0}.
Poly local_min_poly(const Dense& m, std::span<const Code> v);
// A vector whose local minimal polynomial is the minimal polynomial of m.
std::vector<Code> maximal_vector(const Dense& m);
Poly minimal_polynomial(const Dense& m);

// Certificate for a = u b u^-1.
struct Conjugator {
  StableMatrix u;
  StableMatrix a;
  StableMatrix b;

  bool verify() const { return conjugate(b, u) == a; }
  // Certificate for b = u^-1 a u.
  Conjugator inverted() const { return {inverse(u), b, a}; }
  // From a = u b u^-1 and b = v c v^-1: a = (u v) c (u v)^-1.
  Conjugator then(const Conjugator& next) const { return {u * next.u, a, next.b}; }
};

// Conjugacy in the stable group: decided at the common support, where it
// coincides with matrix similarity (identity summands cancel). Returns a
// verified certificate, or nullopt when a and b are not conjugate.
std::optional<Conjugator> similar(const StableMatrix& a, const StableMatrix& b);

// Support-independent conjugacy invariant: the invariant factors at support
// 2 * support(a) with the (lambda + 1) factors dropped.
std::string stable_class_key(const StableMatrix& a);

}  // namespace stablegl
