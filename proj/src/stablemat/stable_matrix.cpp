#include "stablegl/stable_matrix.hpp"

#include <cctype>

#include "stablegl/error.hpp"
#include "stablegl/frobenius.hpp"

namespace stablegl {

StableMatrix::StableMatrix(Field f) : field_(std::move(f)) {}

StableMatrix::StableMatrix(Field f, int n, std::vector<Code> entries)
    : field_(std::move(f)), n_(n), entries_(std::move(entries)) {
  trim();
}

void StableMatrix::trim() {
  int n = n_;
  auto get = [&](int i, int j) { return entries_[static_cast<std::size_t>(i * n_ + j)]; };
  while (n > 0) {
    const int last = n - 1;
    bool identity_pattern = get(last, last) == 1;
    for (int j = 0; j < last && identity_pattern; ++j)
      identity_pattern = get(last, j) == 0 && get(j, last) == 0;
    if (!identity_pattern) break;
    n = last;
  }
  if (n == n_) return;
  std::vector<Code> trimmed(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) trimmed[static_cast<std::size_t>(i * n + j)] = get(i, j);
  entries_ = std::move(trimmed);
  n_ = n;
}

StableMatrix StableMatrix::from_dense(const Dense& square) {
  if (square.rows() != square.cols()) throw Error("stable matrix block must be square");
  return StableMatrix(square.field(), square.rows(),
                      std::vector<Code>(square.data().begin(), square.data().end()));
}

StableMatrix StableMatrix::from_rows(Field f, const std::vector<std::vector<Code>>& rows) {
  const int n = static_cast<int>(rows.size());
  std::vector<Code> entries;
  entries.reserve(static_cast<std::size_t>(n * n));
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != n) throw Error("matrix literal is not square");
    for (Code c : r) {
      if (c >= f->order()) throw Error("matrix entry out of range for " + f->name());
      entries.push_back(c);
    }
  }
  return StableMatrix(std::move(f), n, std::move(entries));
}

Dense StableMatrix::embed(int m) const {
  if (m < n_)
    throw SupportTooSmall("support " + std::to_string(m) + " below matrix support " +
                          std::to_string(n_));
  Dense d(field_, m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) d.at(i, j) = at(i, j);
  return d;
}

std::size_t StableMatrix::hash() const {
  std::size_t h = static_cast<std::size_t>(n_) * 0x9E3779B97F4A7C15ull;
  for (Code c : entries_) h = (h ^ c) * 0x100000001B3ull + (h >> 29);
  return h;
}

std::string StableMatrix::rows_string() const {
  std::string s = "[";
  for (int i = 0; i < n_; ++i) {
    if (i) s += ",";
    s += "[";
    for (int j = 0; j < n_; ++j) {
      if (j) s += ",";
      s += format_element(at(i, j));
    }
    s += "]";
  }
  return s + "]";
}

std::string StableMatrix::to_string() const {
  return "over " + field_->name() + "; " + rows_string();
}

StableMatrix identity(const Field& f) { return StableMatrix(f); }

StableMatrix diag(const Field& f, const std::vector<Code>& values) {
  Dense d(f, static_cast<int>(values.size()), static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= f->order()) throw Error("diagonal entry out of range for " + f->name());
    d.at(static_cast<int>(i), static_cast<int>(i)) = values[i];
  }
  return StableMatrix::from_dense(d);
}

StableMatrix block_diag(const Field& f, const std::vector<Dense>& blocks) {
  int n = 0;
  for (const auto& b : blocks) {
    require_same_field(f, b.field());
    if (b.rows() != b.cols()) throw Error("diagonal blocks must be square");
    n += b.rows();
  }
  Dense d(f, n, n);
  int off = 0;
  for (const auto& b : blocks) {
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) d.at(off + i, off + j) = b.at(i, j);
    off += b.rows();
  }
  return StableMatrix::from_dense(d);
}

Dense t_dense(const Field& f) {
  Dense t(f, 2, 2);
  t.at(0, 0) = 1;
  t.at(0, 1) = 1;
  t.at(1, 0) = 1;
  return t;
}

StableMatrix t_block(const Field& f) { return StableMatrix::from_dense(t_dense(f)); }

StableMatrix g_k(const Field& f, int k) {
  if (k < 1) throw Error("g_k requires k >= 1");
  Dense d = Dense::identity(f, k + 1);
  d.at(k - 1, k - 1) = 1;
  d.at(k - 1, k) = 1;
  d.at(k, k - 1) = 1;
  d.at(k, k) = 0;
  return StableMatrix::from_dense(d);
}

StableMatrix d_k(const Field& f, int k) {
  if (k < 0) throw Error("d_k requires k >= 0");
  return block_diag(f, std::vector<Dense>(static_cast<std::size_t>(k), t_dense(f)));
}

StableMatrix operator*(const StableMatrix& a, const StableMatrix& b) {
  require_same_field(a.field(), b.field());
  const int n = std::max(a.support(), b.support());
  if (n == 0) return a;
  const FieldSpec& f = *a.field();
  Dense out(a.field(), n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Code x = a.at(i, k);
      if (!x) continue;
      for (int j = 0; j < n; ++j) out.at(i, j) ^= f.mul(x, b.at(k, j));
    }
  return StableMatrix::from_dense(out);
}

StableMatrix inverse(const StableMatrix& a) {
  if (a.is_identity()) return a;
  return StableMatrix::from_dense(inverse(a.embed(a.support())));
}

FieldElement det(const StableMatrix& a) {
  return FieldElement(a.field(), determinant(a.embed(a.support())));
}

bool is_invertible(const StableMatrix& a) { return !det(a).is_zero(); }

StableMatrix power(const StableMatrix& a, long long e) {
  StableMatrix base = e < 0 ? inverse(a) : a;
  unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  StableMatrix result(a.field());
  while (n) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

std::optional<int> order(const StableMatrix& a, int bound) {
  if (!is_invertible(a)) throw SingularMatrix("order of a singular matrix");
  StableMatrix p = a;
  for (int m = 1; m <= bound; ++m) {
    if (p.is_identity()) return m;
    p = p * a;
  }
  return std::nullopt;
}

bool commute(const StableMatrix& a, const StableMatrix& b) { return a * b == b * a; }

StableMatrix conjugate(const StableMatrix& a, const StableMatrix& u) {
  return u * a * inverse(u);
}

int minimal_support(const StableMatrix& a) {
  const int n = a.support();
  if (n == 0) return 0;
  Dense m = a.embed(n);
  for (int i = 0; i < n; ++i) m.at(i, i) ^= 1;
  const int k1 = n - rank(m);
  const int k2 = n - rank(m * m);
  return n - (2 * k1 - k2);
}

Poly char_poly(const StableMatrix& a, int at_support) {
  return char_poly_hessenberg(a.embed(at_support));
}

Poly min_poly(const StableMatrix& a, int at_support) {
  return minimal_polynomial(a.embed(at_support));
}

StableMatrix parse_matrix(std::string_view text) {
  auto semi = text.find(';');
  if (semi == std::string_view::npos)
    throw Error("matrix literal must look like 'over gf(q); [[...]]'");
  auto head = text.substr(0, semi);
  while (!head.empty() && std::isspace(static_cast<unsigned char>(head.front()))) head.remove_prefix(1);
  if (head.substr(0, 4) != "over") throw Error("matrix literal must start with 'over'");
  Field f = parse_field(head.substr(4));
  std::string body;
  for (char c : text.substr(semi + 1))
    if (!std::isspace(static_cast<unsigned char>(c))) body += c;
  if (body.size() < 2 || body.front() != '[' || body.back() != ']')
    throw Error("malformed matrix rows '" + body + "'");
  std::vector<std::vector<Code>> rows;
  std::string inner = body.substr(1, body.size() - 2);
  std::size_t pos = 0;
  while (pos < inner.size()) {
    if (inner[pos] == ',') {
      ++pos;
      continue;
    }
    if (inner[pos] != '[') throw Error("malformed matrix rows '" + body + "'");
    const auto close = inner.find(']', pos);
    if (close == std::string::npos) throw Error("unterminated matrix row in '" + body + "'");
    std::vector<Code> row;
    std::string cells = inner.substr(pos + 1, close - pos - 1);
    std::size_t c = 0;
    while (c <= cells.size() && !cells.empty()) {
      auto comma = cells.find(',', c);
      if (comma == std::string::npos) comma = cells.size();
      row.push_back(parse_element(*f, std::string_view(cells).substr(c, comma - c)));
      c = comma + 1;
    }
    rows.push_back(std::move(row));
    pos = close + 1;
  }
  return StableMatrix::from_rows(f, rows);
}

}  // namespace stablegl
