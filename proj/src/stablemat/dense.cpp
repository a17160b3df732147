#include "stablegl/dense.hpp"

#include <utility>

#include "stablegl/error.hpp"

namespace stablegl {

Dense::Dense(Field f, int rows, int cols)
    : field_(std::move(f)), rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows * cols), 0) {}

Dense Dense::identity(Field f, int n) {
  Dense m(std::move(f), n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

std::vector<Code> Dense::column(int j) const {
  std::vector<Code> v(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) v[static_cast<std::size_t>(i)] = at(i, j);
  return v;
}

void Dense::set_column(int j, std::span<const Code> v) {
  for (int i = 0; i < rows_; ++i) at(i, j) = v[static_cast<std::size_t>(i)];
}

Dense Dense::operator*(const Dense& b) const {
  require_same_field(field_, b.field_);
  if (cols_ != b.rows_) throw Error("dimension mismatch in matrix product");
  Dense out(field_, rows_, b.cols_);
  const FieldSpec& f = *field_;
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Code a = at(i, k);
      if (!a) continue;
      for (int j = 0; j < b.cols_; ++j) out.at(i, j) ^= f.mul(a, b.at(k, j));
    }
  return out;
}

Dense Dense::operator+(const Dense& b) const {
  require_same_field(field_, b.field_);
  if (rows_ != b.rows_ || cols_ != b.cols_) throw Error("dimension mismatch in matrix sum");
  Dense out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] ^= b.data_[i];
  return out;
}

std::vector<Code> Dense::apply(std::span<const Code> v) const {
  std::vector<Code> out(static_cast<std::size_t>(rows_), 0);
  const FieldSpec& f = *field_;
  for (int i = 0; i < rows_; ++i) {
    Code acc = 0;
    for (int j = 0; j < cols_; ++j) acc ^= f.mul(at(i, j), v[static_cast<std::size_t>(j)]);
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

Dense Dense::transpose() const {
  Dense out(field_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

bool Dense::is_zero() const {
  for (Code c : data_)
    if (c) return false;
  return true;
}

std::vector<int> rref(Dense& m) {
  const FieldSpec& f = *m.field();
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int p = -1;
    for (int i = row; i < m.rows(); ++i)
      if (m.at(i, col)) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m.at(p, j), m.at(row, j));
    const Code inv = f.inv(m.at(row, col));
    for (int j = col; j < m.cols(); ++j) m.at(row, j) = f.mul(m.at(row, j), inv);
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row) continue;
      const Code c = m.at(i, col);
      if (!c) continue;
      for (int j = col; j < m.cols(); ++j) m.at(i, j) ^= f.mul(c, m.at(row, j));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(Dense m) { return static_cast<int>(rref(m).size()); }

Dense nullspace(const Dense& m) {
  Dense r = m;
  const auto pivots = rref(r);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<int> free;
  for (int j = 0; j < m.cols(); ++j)
    if (!is_pivot[static_cast<std::size_t>(j)]) free.push_back(j);
  Dense basis(m.field(), m.cols(), static_cast<int>(free.size()));
  for (std::size_t b = 0; b < free.size(); ++b) {
    const int fj = free[b];
    basis.at(fj, static_cast<int>(b)) = 1;
    // Characteristic 2: -r = r.
    for (std::size_t i = 0; i < pivots.size(); ++i)
      basis.at(pivots[i], static_cast<int>(b)) = r.at(static_cast<int>(i), fj);
  }
  return basis;
}

std::optional<std::vector<Code>> solve(const Dense& m, std::span<const Code> b) {
  Dense aug(m.field(), m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = b[static_cast<std::size_t>(i)];
  }
  const auto pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  std::vector<Code> x(static_cast<std::size_t>(m.cols()), 0);
  for (std::size_t i = 0; i < pivots.size(); ++i)
    x[static_cast<std::size_t>(pivots[i])] = aug.at(static_cast<int>(i), m.cols());
  return x;
}

Code determinant(Dense m) {
  if (m.rows() != m.cols()) throw Error("determinant of a non-square matrix");
  const FieldSpec& f = *m.field();
  const int n = m.rows();
  Code det = 1;
  for (int col = 0; col < n; ++col) {
    int p = -1;
    for (int i = col; i < n; ++i)
      if (m.at(i, col)) {
        p = i;
        break;
      }
    if (p < 0) return 0;
    if (p != col)
      for (int j = 0; j < n; ++j) std::swap(m.at(p, j), m.at(col, j));
    const Code pivot = m.at(col, col);
    det = f.mul(det, pivot);
    const Code inv = f.inv(pivot);
    for (int i = col + 1; i < n; ++i) {
      const Code c = f.mul(m.at(i, col), inv);
      if (!c) continue;
      for (int j = col; j < n; ++j) m.at(i, j) ^= f.mul(c, m.at(col, j));
    }
  }
  return det;
}

Dense inverse(const Dense& m) {
  const int n = m.rows();
  if (n != m.cols()) throw Error("inverse of a non-square matrix");
  Dense aug(m.field(), n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  const auto pivots = rref(aug);
  if (n > 0 && (static_cast<int>(pivots.size()) < n || pivots[static_cast<std::size_t>(n - 1)] != n - 1))
    throw SingularMatrix("matrix is singular");
  Dense out(m.field(), n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(i, j) = aug.at(i, n + j);
  return out;
}

Dense eval_poly(const Poly& p, const Dense& m) {
  const int n = m.rows();
  Dense acc(m.field(), n, n);
  for (int d = p.degree(); d >= 0; --d) {
    acc = acc * m;
    const Code c = p.coeff(d);
    for (int i = 0; i < n; ++i) acc.at(i, i) ^= c;
  }
  return acc;
}

std::vector<Code> eval_poly_on(const Poly& p, const Dense& m, std::span<const Code> v) {
  std::vector<Code> acc(v.size(), 0);
  const FieldSpec& f = *m.field();
  for (int d = p.degree(); d >= 0; --d) {
    acc = m.apply(acc);
    const Code c = p.coeff(d);
    if (c)
      for (std::size_t i = 0; i < v.size(); ++i) acc[i] ^= f.mul(c, v[i]);
  }
  return acc;
}

Poly char_poly_hessenberg(const Dense& input) {
  const int n = input.rows();
  const Field& field = input.field();
  const FieldSpec& f = *field;
  Dense h = input;
  // Similarity reduction to upper Hessenberg form.
  for (int col = 0; col + 2 < n; ++col) {
    int p = -1;
    for (int i = col + 1; i < n; ++i)
      if (h.at(i, col)) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != col + 1) {
      for (int j = 0; j < n; ++j) std::swap(h.at(p, j), h.at(col + 1, j));
      for (int i = 0; i < n; ++i) std::swap(h.at(i, p), h.at(i, col + 1));
    }
    const Code inv = f.inv(h.at(col + 1, col));
    for (int i = col + 2; i < n; ++i) {
      const Code c = f.mul(h.at(i, col), inv);
      if (!c) continue;
      // Row_i -= c Row_{col+1}; then Col_{col+1} += c Col_i.
      for (int j = 0; j < n; ++j) h.at(i, j) ^= f.mul(c, h.at(col + 1, j));
      for (int r = 0; r < n; ++r) h.at(r, col + 1) ^= f.mul(c, h.at(r, i));
    }
  }
  // p_k = (lambda - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
  std::vector<Poly> p;
  p.emplace_back(Poly::constant(field, 1));
  for (int k = 0; k < n; ++k) {
    Poly next = Poly::linear(field, h.at(k, k)) * p[static_cast<std::size_t>(k)];
    Code prod = 1;
    for (int i = k - 1; i >= 0; --i) {
      prod = f.mul(prod, h.at(i + 1, i));
      const Code c = f.mul(h.at(i, k), prod);
      if (c) next = next + p[static_cast<std::size_t>(i)].scaled(c);
    }
    p.push_back(std::move(next));
  }
  return p.back();
}

Dense companion(const Poly& monic) {
  const int d = monic.degree();
  Dense c(monic.field(), d, d);
  for (int i = 0; i + 1 < d; ++i) c.at(i + 1, i) = 1;
  for (int i = 0; i < d; ++i) c.at(i, d - 1) = monic.coeff(i);
  return c;
}

}  // namespace stablegl
