#include "stablegl/folang/domains.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <unordered_set>

#include "stablegl/centralizer.hpp"
#include "stablegl/error.hpp"
#include "stablegl/frobenius.hpp"
#include "stablegl/order3.hpp"

namespace stablegl::fol {

namespace {

Dense plus_scalar(const Dense& m, Code c) {
  Dense r = m;
  for (int i = 0; i < m.rows(); ++i) r.at(i, i) ^= c;
  return r;
}

}  // namespace

std::string fast_class_key(const StableMatrix& a) {
  const Field& f = a.field();
  if (power(a, 3) == identity(f)) {
    const int n = a.support();
    const Dense m = a.embed(n);
    if (f->has_xi()) {
      const Code xi = f->xi();
      const int mxi = n - rank(plus_scalar(m, xi));
      const int mxi2 = n - rank(plus_scalar(m, f->mul(xi, xi)));
      return "o3:" + to_string(Order3Signature::xi(mxi, mxi2));
    }
    const int t = (n - rank(plus_scalar(m * m + m, 1))) / 2;
    return "o3:" + to_string(Order3Signature::t(t));
  }
  return "rcf:" + stable_class_key(a);
}

std::vector<StableMatrix> gl_generators(const Field& f, int n) {
  std::vector<StableMatrix> gens;
  for (int i = 0; i + 1 < n; ++i)
    for (int b = 0; b < f->degree(); ++b)
      for (const auto& [r, c] : {std::pair{i, i + 1}, std::pair{i + 1, i}}) {
        Dense m = Dense::identity(f, n);
        m.at(r, c) = static_cast<Code>(1u << b);
        gens.push_back(StableMatrix::from_dense(m));
      }
  if (n >= 1 && f->order() > 2) {
    for (unsigned g = 2; g < f->order(); ++g) {
      const Code c = static_cast<Code>(g);
      unsigned ord = 1;
      for (Code p = c; p != 1; p = f->mul(p, c)) ++ord;
      if (ord != f->order() - 1) continue;
      Dense m = Dense::identity(f, n);
      m.at(0, 0) = c;
      gens.push_back(StableMatrix::from_dense(m));
      break;
    }
  }
  return gens;
}

std::optional<std::uint64_t> span_size(const FieldSpec& f, std::size_t dim, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    if (total > budget / f.order()) return std::nullopt;
    total *= f.order();
  }
  return total;
}

std::vector<StableMatrix> general_linear_group(const Field& f, int n, std::uint64_t budget) {
  const auto total = span_size(*f, static_cast<std::size_t>(n * n), budget);
  if (!total) throw BudgetExceeded("GL_" + std::to_string(n) + " over " + f->name() + " exceeds budget");
  std::vector<StableMatrix> out;
  for (std::uint64_t idx = 0; idx < *total; ++idx) {
    Dense m(f, n, n);
    std::uint64_t rest = idx;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        m.at(i, j) = static_cast<Code>(rest % f->order());
        rest /= f->order();
      }
    if (determinant(m) != 0) out.push_back(StableMatrix::from_dense(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<StableMatrix> class_representatives(const Field& f, int n) {
  // Monic polynomials with nonzero constant term, by degree.
  std::vector<std::vector<Poly>> polys(static_cast<std::size_t>(n + 1));
  for (int d = 1; d <= n; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= f->order();
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<Code> c(static_cast<std::size_t>(d + 1), 0);
      std::uint64_t rest = idx;
      for (int i = 0; i < d; ++i) {
        c[static_cast<std::size_t>(i)] = static_cast<Code>(rest % f->order());
        rest /= f->order();
      }
      c[static_cast<std::size_t>(d)] = 1;
      if (c[0] == 0) continue;
      polys[static_cast<std::size_t>(d)].emplace_back(f, c);
    }
  }
  std::vector<StableMatrix> out;
  std::vector<Poly> chain;
  std::function<void(int)> rec = [&](int remaining) {
    if (remaining == 0) {
      std::vector<Dense> blocks;
      for (const auto& p : chain) blocks.push_back(companion(p));
      out.push_back(block_diag(f, blocks));
      return;
    }
    const int max_deg = chain.empty() ? remaining : std::min(remaining, chain.back().degree());
    for (int d = 1; d <= max_deg; ++d)
      for (const auto& p : polys[static_cast<std::size_t>(d)]) {
        if (!chain.empty() && !(chain.back() % p).is_zero()) continue;
        chain.push_back(p);
        rec(remaining - d);
        chain.pop_back();
      }
  };
  rec(n);
  std::sort(out.begin(), out.end());
  return out;
}

StableMatrix minimal_representative(const StableMatrix& a) {
  if (power(a, 3) == identity(a.field())) return canonicalize_order3(a).certificate.a;
  const Field& f = a.field();
  auto factors = frobenius_form(a.embed(a.support())).invariant_factors;
  // Drop the 1x1 Jordan blocks for eigenvalue 1; they sit in the smallest
  // invariant factors that (lambda + 1) divides exactly once.
  const Poly x1 = Poly::linear(f, 1);
  int drop = a.support() - minimal_support(a);
  for (auto it = factors.rbegin(); it != factors.rend() && drop > 0; ++it) {
    if (!(*it % x1).is_zero()) continue;
    const Poly q = *it / x1;
    if ((q % x1).is_zero()) break;
    *it = q;
    --drop;
  }
  std::vector<Dense> blocks;
  for (const auto& p : factors)
    if (p.degree() > 0) blocks.push_back(companion(p));
  return block_diag(f, blocks);
}

std::vector<StableMatrix> conjugacy_orbit(const StableMatrix& a, int n, std::uint64_t budget) {
  StableMatrix start = a;
  if (a.support() > n) {
    if (minimal_support(a) > n) return {};
    start = minimal_representative(a);
  }
  // |orbit| >= |GL_n| / q^dim C(a).
  const double q = a.field()->order();
  double lower = std::pow(q, -static_cast<double>(centralizer_basis(a.field(), {start}, n).size()));
  for (int i = 0; i < n; ++i) lower *= std::pow(q, n) - std::pow(q, i);
  if (lower > static_cast<double>(budget)) throw BudgetExceeded("conjugacy orbit exceeds budget");
  const auto gens = gl_generators(a.field(), n);
  std::vector<StableMatrix> inverses;
  for (const auto& g : gens) inverses.push_back(inverse(g));
  std::unordered_set<StableMatrix, StableMatrixHash> seen{start};
  std::deque<StableMatrix> queue{start};
  while (!queue.empty()) {
    const StableMatrix x = std::move(queue.front());
    queue.pop_front();
    for (std::size_t g = 0; g < gens.size(); ++g) {
      StableMatrix y = gens[g] * x * inverses[g];
      if (seen.insert(y).second) {
        if (seen.size() > budget) throw BudgetExceeded("conjugacy orbit exceeds budget");
        queue.push_back(std::move(y));
      }
    }
  }
  std::vector<StableMatrix> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<StableMatrix> commuting_conjugates(const StableMatrix& of, const StableMatrix& with, int n,
                                               std::uint64_t budget) {
  const Field& f = of.field();
  if (with.support() > n) return {};
  std::vector<StableMatrix> out;
  const auto basis = centralizer_basis(f, {with}, n);
  if (const auto total = span_size(*f, basis.size(), budget)) {
    const std::string key = fast_class_key(of);
    const bool order3 = key.starts_with("o3:");
    const Dense zero(f, n, n);
    const StableMatrix e = identity(f);
    for (std::uint64_t idx = 0; idx < *total; ++idx) {
      const Dense x = span_element(basis, zero, idx);
      if (determinant(x) == 0) continue;
      StableMatrix m = StableMatrix::from_dense(x);
      if (order3 && power(m, 3) != e) continue;
      if (fast_class_key(m) == key) out.push_back(std::move(m));
    }
  } else {
    for (auto& x : conjugacy_orbit(of, n, budget))
      if (commute(x, with)) out.push_back(std::move(x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace stablegl::fol
