#include "stablegl/centralizer.hpp"

#include "stablegl/error.hpp"

namespace stablegl {

Dense commutation_system(const Field& f, const std::vector<StableMatrix>& generators, int m) {
  const int unknowns = m * m;
  Dense sys(f, static_cast<int>(generators.size()) * unknowns, unknowns);
  int row = 0;
  for (const auto& g : generators) {
    require_same_field(f, g.field());
    const Dense c = g.embed(m);
    // (M C - C M)(i,j) = sum_k M(i,k) C(k,j) - C(i,k) M(k,j)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j, ++row)
        for (int k = 0; k < m; ++k) {
          sys.at(row, i * m + k) ^= c.at(k, j);
          sys.at(row, k * m + j) ^= c.at(i, k);
        }
  }
  return sys;
}

std::vector<Dense> centralizer_basis(const Field& f, const std::vector<StableMatrix>& generators,
                                     int m) {
  const Dense kernel = nullspace(commutation_system(f, generators, m));
  std::vector<Dense> basis;
  for (int b = 0; b < kernel.cols(); ++b) {
    Dense x(f, m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) x.at(i, j) = kernel.at(i * m + j, b);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<AffineCentralizer> stable_centralizer(const Field& f,
                                                    const std::vector<StableMatrix>& generators,
                                                    int s) {
  int big = s;
  for (const auto& g : generators) big = std::max(big, g.support());
  // Full system at the common support, then fix every entry outside the s x s
  // block to the identity pattern and move it to the right-hand side.
  const Dense full = commutation_system(f, generators, big);
  const int unknowns = s * s;
  Dense sys(f, full.rows(), unknowns);
  std::vector<Code> rhs(static_cast<std::size_t>(full.rows()), 0);
  for (int r = 0; r < full.rows(); ++r)
    for (int i = 0; i < big; ++i)
      for (int j = 0; j < big; ++j) {
        const Code c = full.at(r, i * big + j);
        if (!c) continue;
        if (i < s && j < s)
          sys.at(r, i * s + j) = c;
        else if (i == j)
          rhs[static_cast<std::size_t>(r)] ^= c;  // fixed entry 1, char 2
      }
  auto x = solve(sys, rhs);
  if (!x) return std::nullopt;
  AffineCentralizer out{Dense(f, s, s), {}};
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) out.particular.at(i, j) = (*x)[static_cast<std::size_t>(i * s + j)];
  const Dense kernel = nullspace(sys);
  for (int b = 0; b < kernel.cols(); ++b) {
    Dense d(f, s, s);
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) d.at(i, j) = kernel.at(i * s + j, b);
    out.directions.push_back(std::move(d));
  }
  return out;
}

Dense span_element(const std::vector<Dense>& basis, const Dense& offset, unsigned long long index) {
  Dense x = offset;
  const FieldSpec& f = *offset.field();
  const unsigned long long q = f.order();
  for (const auto& b : basis) {
    const Code c = static_cast<Code>(index % q);
    index /= q;
    if (!c) continue;
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j) x.at(i, j) ^= f.mul(c, b.at(i, j));
  }
  return x;
}

}  // namespace stablegl
