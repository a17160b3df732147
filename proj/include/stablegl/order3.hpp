#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stablegl/frobenius.hpp"
#include "stablegl/stable_matrix.hpp"

namespace stablegl {

enum class RootCase { HasXi, NoXi };

RootCase root_case(const FieldSpec& f);
std::string to_string(RootCase c);

// Conjugacy invariant of an A with A^3 = E. Has-xi: eigenvalue multiplicities
// of xi and xi^2. No-xi: number of 2 x 2 blocks with char poly l^2 + l + 1.
struct Order3Signature {
  RootCase tag = RootCase::HasXi;
  int mxi = 0;
  int mxi2 = 0;
  int t_count = 0;

  static Order3Signature xi(int mxi, int mxi2) { return {RootCase::HasXi, mxi, mxi2, 0}; }
  static Order3Signature t(int count) { return {RootCase::NoXi, 0, 0, count}; }

  bool is_trivial() const { return mxi == 0 && mxi2 == 0 && t_count == 0; }
  // Number of nontrivial blocks.
  int weight() const { return tag == RootCase::HasXi ? mxi + mxi2 : t_count; }
  // Support of the canonical matrix.
  int dimension() const { return tag == RootCase::HasXi ? mxi + mxi2 : 2 * t_count; }

  auto operator<=>(const Order3Signature&) const = default;
};

// "xi[mxi=1,mxi2=1]" or "t[count=2]".
std::string to_string(const Order3Signature& s);
Order3Signature parse_signature(std::string_view text);

// Per joint block the pair acts as (xi^e1, xi^e2) on a line, or as
// (T^e1, T^e2) on a plane. No-xi pairs are normalized modulo
// (e1, e2) ~ (-e1, -e2), leaving the types (1,0), (1,1), (1,2), (0,1).
// Pairs are kept sorted in canonical block order; (0,0) never appears.
struct JointSignature {
  RootCase tag = RootCase::HasXi;
  std::vector<std::pair<int, int>> pairs;

  Order3Signature first() const;
  Order3Signature second() const;
  int dimension() const;

  auto operator<=>(const JointSignature&) const = default;
};

// Builds a JointSignature from arbitrary exponent pairs: normalizes, drops
// (0,0), sorts.
JointSignature make_joint(RootCase tag, std::vector<std::pair<int, int>> pairs);

// "xi{(1,0),(0,1)}" or "t{(1,2)}".
std::string to_string(const JointSignature& j);

// Has-xi: diag of xi's then xi^2's. No-xi: D_t.
StableMatrix canonical_matrix(const Field& f, const Order3Signature& s);
// The pair (P, Q) in joint canonical form; P = canonical_matrix(first()).
std::pair<StableMatrix, StableMatrix> canonical_pair(const Field& f, const JointSignature& j);

struct Order3Canonical {
  Order3Signature signature;
  Conjugator certificate;  // canonical = u a u^-1
};
struct JointCanonical {
  JointSignature signature;
  Conjugator first;   // P = u a u^-1
  Conjugator second;  // Q = u b u^-1, same u
};

// Throws NotOrder3.
Order3Canonical canonicalize_order3(const StableMatrix& a);
// Throws NotOrder3 or NotCommuting.
JointCanonical joint_canonicalize(const StableMatrix& a, const StableMatrix& b);

Order3Signature product_signature(const JointSignature& j);

// Every order-3 signature (E included) whose canonical matrix fits in support n,
// in ascending order.
std::vector<Order3Signature> signatures_up_to(const Field& f, int n);

// Joint signatures with projections d1 and d2 whose blocks fit in support n, in
// ascending order. Throws SupportTooSmall if d1 or d2 alone does not fit. The
// list is complete for every n once saturated_at(d1, d2) <= n.
std::vector<JointSignature> enumerate_commuting_pair_signatures(const Order3Signature& d1,
                                                                const Order3Signature& d2, int n);
std::vector<JointSignature> enumerate_commuting_pair_signatures(const Order3Signature& d, int n);
int saturated_at(const Order3Signature& d1, const Order3Signature& d2);

struct ClassCountReport {
  Order3Signature input;
  std::vector<Order3Signature> products;  // ascending, distinct
  int count = 0;
  std::vector<std::pair<StableMatrix, StableMatrix>> witnesses;  // per product
  int support = 0;
  bool saturated = false;

  // A ~ canonical(input), B ~ A, AB = BA and sig(AB) = products[i] for every i.
  bool witnesses_verify() const;
};

ClassCountReport class_count_products(const Field& f, const Order3Signature& d, int n);

struct BruteForceOptions {
  std::uint64_t budget = 100'000'000;
  bool parallel = true;
};

// Oracle: A = canonical(d) at support n, B over every element of the
// centralizer of A in M_n, kept when invertible and conjugate to A; products
// classified by their rational canonical form. Throws BudgetExceeded when the
// centralizer has more than budget elements.
ClassCountReport class_count_products_bruteforce(const Field& f, const Order3Signature& d, int n,
                                                 const BruteForceOptions& options = {});

// (a, b) with [[a, b], [b, a + b]]^3 = I, by exhaustive sweep, lexicographic.
std::vector<std::pair<Code, Code>> order3_2x2_solutions(const FieldSpec& f);
Dense order3_2x2_matrix(const Field& f, Code a, Code b);

}  // namespace stablegl
