#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stablegl/dense.hpp"
#include "stablegl/field.hpp"
#include "stablegl/poly.hpp"

namespace stablegl {

// An element of the stable linear group GL(K): a finite n x n block A standing
// for the infinite matrix A (+) I. Always stored trimmed, so equality of stable
// elements is equality of representations.
class StableMatrix {
 public:
  explicit StableMatrix(Field f);  // E
  // Trims; `square` need not be invertible here (see is_invertible()).
  static StableMatrix from_dense(const Dense& square);
  static StableMatrix from_rows(Field f, const std::vector<std::vector<Code>>& rows);

  const Field& field() const { return field_; }
  int support() const { return n_; }
  Code at(int i, int j) const {
    if (i < n_ && j < n_) return entries_[static_cast<std::size_t>(i * n_ + j)];
    return i == j ? 1 : 0;
  }
  bool is_identity() const { return n_ == 0; }
  // The m x m completion; throws SupportTooSmall when m < support().
  Dense embed(int m) const;

  bool operator==(const StableMatrix& b) const {
    return same_field(field_, b.field_) && n_ == b.n_ && entries_ == b.entries_;
  }
  bool operator!=(const StableMatrix& b) const { return !(*this == b); }
  // Canonical total order: support first, then entries lexicographically.
  bool operator<(const StableMatrix& b) const {
    if (n_ != b.n_) return n_ < b.n_;
    return entries_ < b.entries_;
  }
  std::size_t hash() const;

  // "over gf(4); [[1,0],[0,2]]"; identity prints as "over gf(4); []".
  std::string to_string() const;
  std::string rows_string() const;

 private:
  StableMatrix(Field f, int n, std::vector<Code> entries);
  void trim();

  Field field_;
  int n_ = 0;
  std::vector<Code> entries_;
};

struct StableMatrixHash {
  std::size_t operator()(const StableMatrix& m) const { return m.hash(); }
};

StableMatrix identity(const Field& f);
StableMatrix diag(const Field& f, const std::vector<Code>& values);
// Block-diagonal matrix of square blocks placed from the top-left.
StableMatrix block_diag(const Field& f, const std::vector<Dense>& blocks);
// T = [[1,1],[1,0]].
Dense t_dense(const Field& f);
StableMatrix t_block(const Field& f);
// T at rows/columns (k, k+1), 1-based; k >= 1.
StableMatrix g_k(const Field& f, int k);
// k copies of T from the top-left; k >= 0.
StableMatrix d_k(const Field& f, int k);

StableMatrix operator*(const StableMatrix& a, const StableMatrix& b);
StableMatrix inverse(const StableMatrix& a);
FieldElement det(const StableMatrix& a);
bool is_invertible(const StableMatrix& a);
StableMatrix power(const StableMatrix& a, long long e);
// Least m in [1, bound] with a^m = E, or nullopt when the order exceeds bound.
std::optional<int> order(const StableMatrix& a, int bound);
bool commute(const StableMatrix& a, const StableMatrix& b);
// u a u^-1
StableMatrix conjugate(const StableMatrix& a, const StableMatrix& u);

// Smallest support of any element conjugate to a.
int minimal_support(const StableMatrix& a);

Poly char_poly(const StableMatrix& a, int at_support);
Poly min_poly(const StableMatrix& a, int at_support);

// Parses "over gf(4); [[1,0],[0,x+1]]".
StableMatrix parse_matrix(std::string_view text);

}  // namespace stablegl
