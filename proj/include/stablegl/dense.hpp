#pragma once

#include <optional>
#include <span>
#include <vector>

#include "stablegl/field.hpp"
#include "stablegl/poly.hpp"

namespace stablegl {

// Row-major rectangular matrix over GF(2^k). Used for the exact linear algebra
// behind stable matrices; carries no group semantics.
class Dense {
 public:
  Dense(Field f, int rows, int cols);
  static Dense identity(Field f, int n);

  const Field& field() const { return field_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Code& at(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  Code at(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  std::span<const Code> data() const { return data_; }

  std::vector<Code> column(int j) const;
  void set_column(int j, std::span<const Code> v);

  Dense operator*(const Dense& b) const;
  Dense operator+(const Dense& b) const;
  std::vector<Code> apply(std::span<const Code> v) const;
  Dense transpose() const;
  bool is_zero() const;

  bool operator==(const Dense& b) const {
    return same_field(field_, b.field_) && rows_ == b.rows_ && cols_ == b.cols_ &&
           data_ == b.data_;
  }

 private:
  Field field_;
  int rows_;
  int cols_;
  std::vector<Code> data_;
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(Dense& m);
int rank(Dense m);
// Basis of {x : m x = 0}, one column per basis vector.
Dense nullspace(const Dense& m);
// Some x with m x = b (free variables zero), or nullopt when inconsistent.
std::optional<std::vector<Code>> solve(const Dense& m, std::span<const Code> b);
Code determinant(Dense m);
// Throws SingularMatrix.
Dense inverse(const Dense& m);

// p(m) for square m.
Dense eval_poly(const Poly& p, const Dense& m);
// p(m) v without forming p(m).
std::vector<Code> eval_poly_on(const Poly& p, const Dense& m, std::span<const Code> v);

// Characteristic polynomial det(lambda I - m) by Hessenberg reduction.
Poly char_poly_hessenberg(const Dense& m);

// Companion matrix: ones on the subdiagonal, last column holds -coeffs.
Dense companion(const Poly& monic);

}  // namespace stablegl
