#include "stablegl/order3.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <sstream>

#include <omp.h>

#include "stablegl/centralizer.hpp"
#include "stablegl/error.hpp"

namespace stablegl {

namespace {

// Position of e in the canonical eigenvalue order xi, xi^2, 1.
int xi_rank(int e) { return e == 0 ? 2 : e - 1; }

constexpr std::array<std::pair<int, int>, 4> kNoXiTypes{{{1, 0}, {1, 1}, {1, 2}, {0, 1}}};

int block_rank(RootCase tag, const std::pair<int, int>& p) {
  if (tag == RootCase::HasXi) return 3 * xi_rank(p.first) + xi_rank(p.second);
  for (std::size_t i = 0; i < kNoXiTypes.size(); ++i)
    if (kNoXiTypes[i] == p) return static_cast<int>(i);
  throw Error("unnormalized no-xi exponent pair");
}

void require_case(const FieldSpec& f, RootCase tag) {
  if (root_case(f) != tag)
    throw FieldMismatch("signature case " + to_string(tag) + " does not match " + f.name());
}

Dense plus_scalar(const Dense& m, Code c) {
  Dense r = m;
  for (int i = 0; i < m.rows(); ++i) r.at(i, i) ^= c;
  return r;
}

Dense vstack(const std::vector<Dense>& parts) {
  int rows = 0;
  for (const auto& p : parts) rows += p.rows();
  Dense out(parts.front().field(), rows, parts.front().cols());
  int r = 0;
  for (const auto& p : parts)
    for (int i = 0; i < p.rows(); ++i, ++r)
      for (int j = 0; j < p.cols(); ++j) out.at(r, j) = p.at(i, j);
  return out;
}

Dense common_kernel(const std::vector<Dense>& maps) { return nullspace(vstack(maps)); }

// Columns gathered into the transformation matrix, with a rank check per add.
class ColumnBasis {
 public:
  ColumnBasis(Field f, int n) : f_(std::move(f)), n_(n) {}

  bool independent(const std::vector<std::vector<Code>>& extra) const {
    Dense m(f_, n_, static_cast<int>(cols_.size() + extra.size()));
    int j = 0;
    for (const auto& c : cols_) m.set_column(j++, c);
    for (const auto& c : extra) m.set_column(j++, c);
    return rank(m) == m.cols();
  }
  void add(std::vector<Code> v) { cols_.push_back(std::move(v)); }
  int size() const { return static_cast<int>(cols_.size()); }
  Dense matrix() const {
    Dense m(f_, n_, n_);
    for (int j = 0; j < size(); ++j) m.set_column(j, cols_[static_cast<std::size_t>(j)]);
    return m;
  }

 private:
  Field f_;
  int n_;
  std::vector<std::vector<Code>> cols_;
};

void require_order3(const StableMatrix& a) {
  if (power(a, 3) != identity(a.field()))
    throw NotOrder3("element does not satisfy A^3 = E: " + a.to_string());
}

}  // namespace

RootCase root_case(const FieldSpec& f) { return f.has_xi() ? RootCase::HasXi : RootCase::NoXi; }

std::string to_string(RootCase c) { return c == RootCase::HasXi ? "has-xi" : "no-xi"; }

std::string to_string(const Order3Signature& s) {
  if (s.tag == RootCase::HasXi)
    return "xi[mxi=" + std::to_string(s.mxi) + ",mxi2=" + std::to_string(s.mxi2) + "]";
  return "t[count=" + std::to_string(s.t_count) + "]";
}

Order3Signature parse_signature(std::string_view text) {
  auto fail = [&]() -> Order3Signature {
    throw SyntaxError("malformed signature '" + std::string(text) + "'", 1, 1,
                      {"xi[mxi=<n>,mxi2=<n>]", "t[count=<n>]"});
  };
  auto number = [&](std::string_view& rest, std::string_view key) {
    if (!rest.starts_with(key)) fail();
    rest.remove_prefix(key.size());
    int v = -1;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc() || v < 0) fail();
    rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
    return v;
  };
  std::string_view rest = text;
  if (rest.starts_with("xi[")) {
    rest.remove_prefix(3);
    const int a = number(rest, "mxi=");
    const int b = number(rest, ",mxi2=");
    if (rest != "]") fail();
    return Order3Signature::xi(a, b);
  }
  if (rest.starts_with("t[")) {
    rest.remove_prefix(2);
    const int c = number(rest, "count=");
    if (rest != "]") fail();
    return Order3Signature::t(c);
  }
  return fail();
}

JointSignature make_joint(RootCase tag, std::vector<std::pair<int, int>> pairs) {
  JointSignature j{tag, {}};
  for (auto [e1, e2] : pairs) {
    e1 = ((e1 % 3) + 3) % 3;
    e2 = ((e2 % 3) + 3) % 3;
    if (e1 == 0 && e2 == 0) continue;
    if (tag == RootCase::NoXi && (e1 == 2 || (e1 == 0 && e2 == 2))) {
      e1 = (3 - e1) % 3;
      e2 = (3 - e2) % 3;
    }
    j.pairs.emplace_back(e1, e2);
  }
  std::stable_sort(j.pairs.begin(), j.pairs.end(), [tag](const auto& x, const auto& y) {
    return block_rank(tag, x) < block_rank(tag, y);
  });
  return j;
}

Order3Signature JointSignature::first() const {
  Order3Signature s{tag, 0, 0, 0};
  for (const auto& [e1, e2] : pairs) {
    if (tag == RootCase::NoXi)
      s.t_count += e1 != 0;
    else if (e1 == 1)
      ++s.mxi;
    else if (e1 == 2)
      ++s.mxi2;
  }
  return s;
}

Order3Signature JointSignature::second() const {
  std::vector<std::pair<int, int>> swapped;
  for (const auto& [e1, e2] : pairs) swapped.emplace_back(e2, e1);
  return make_joint(tag, swapped).first();
}

int JointSignature::dimension() const {
  const int n = static_cast<int>(pairs.size());
  return tag == RootCase::HasXi ? n : 2 * n;
}

std::string to_string(const JointSignature& j) {
  std::ostringstream os;
  os << (j.tag == RootCase::HasXi ? "xi{" : "t{");
  for (std::size_t i = 0; i < j.pairs.size(); ++i)
    os << (i ? "," : "") << '(' << j.pairs[i].first << ',' << j.pairs[i].second << ')';
  os << '}';
  return os.str();
}

StableMatrix canonical_matrix(const Field& f, const Order3Signature& s) {
  require_case(*f, s.tag);
  if (s.tag == RootCase::NoXi) return d_k(f, s.t_count);
  std::vector<Code> values(static_cast<std::size_t>(s.mxi), f->xi());
  values.insert(values.end(), static_cast<std::size_t>(s.mxi2), f->mul(f->xi(), f->xi()));
  return diag(f, values);
}

std::pair<StableMatrix, StableMatrix> canonical_pair(const Field& f, const JointSignature& j) {
  require_case(*f, j.tag);
  if (j.tag == RootCase::HasXi) {
    std::vector<Code> p, q;
    for (const auto& [e1, e2] : j.pairs) {
      p.push_back(f->pow(f->xi(), e1));
      q.push_back(f->pow(f->xi(), e2));
    }
    return {diag(f, p), diag(f, q)};
  }
  const Dense t = t_dense(f);
  const std::array<Dense, 3> powers{Dense::identity(f, 2), t, t * t};
  std::vector<Dense> p, q;
  for (const auto& [e1, e2] : j.pairs) {
    p.push_back(powers[static_cast<std::size_t>(e1)]);
    q.push_back(powers[static_cast<std::size_t>(e2)]);
  }
  return {block_diag(f, p), block_diag(f, q)};
}

JointCanonical joint_canonicalize(const StableMatrix& a, const StableMatrix& b) {
  require_same_field(a.field(), b.field());
  require_order3(a);
  require_order3(b);
  if (!commute(a, b)) throw NotCommuting("arguments of joint_canonicalize do not commute");
  const Field& f = a.field();
  const RootCase tag = root_case(*f);
  const int n = std::max(a.support(), b.support());
  const Dense ad = a.embed(n), bd = b.embed(n);
  ColumnBasis basis(f, n);
  std::vector<std::pair<int, int>> pairs;

  if (tag == RootCase::HasXi) {
    const Code xi = f->xi();
    std::vector<std::pair<int, int>> types;
    for (int e1 = 0; e1 < 3; ++e1)
      for (int e2 = 0; e2 < 3; ++e2) types.emplace_back(e1, e2);
    std::sort(types.begin(), types.end(), [](const auto& x, const auto& y) {
      return 3 * xi_rank(x.first) + xi_rank(x.second) < 3 * xi_rank(y.first) + xi_rank(y.second);
    });
    for (const auto& [e1, e2] : types) {
      const Dense k = common_kernel({plus_scalar(ad, f->pow(xi, e1)), plus_scalar(bd, f->pow(xi, e2))});
      for (int c = 0; c < k.cols(); ++c) {
        basis.add(k.column(c));
        if (e1 || e2) pairs.emplace_back(e1, e2);
      }
    }
  } else {
    const Dense a2 = ad * ad, b2 = bd * bd;
    const Dense wa = plus_scalar(a2 + ad, 1), wb = plus_scalar(b2 + bd, 1);
    const Dense fa = plus_scalar(ad, 1), fb = plus_scalar(bd, 1);
    struct Part {
      std::pair<int, int> type;
      std::vector<Dense> equations;
      const Dense* mover;  // acts as T on the block
    };
    const std::vector<Part> parts{
        {{1, 0}, {wa, fb}, &ad},
        {{1, 1}, {wa, bd + ad}, &ad},
        {{1, 2}, {wa, bd + a2}, &ad},
        {{0, 1}, {fa, wb}, &bd},
    };
    for (const auto& part : parts) {
      const Dense k = common_kernel(part.equations);
      const Dense shift = plus_scalar(*part.mover, 1);
      ColumnBasis local(f, n);
      for (int c = 0; c < k.cols(); ++c) {
        std::vector<Code> v = k.column(c);
        std::vector<Code> w = shift.apply(v);
        if (!local.independent({v, w})) continue;
        local.add(v);
        local.add(w);
        basis.add(std::move(v));
        basis.add(std::move(w));
        pairs.push_back(part.type);
      }
    }
    const Dense k = common_kernel({fa, fb});
    for (int c = 0; c < k.cols(); ++c) basis.add(k.column(c));
  }
  if (basis.size() != n) throw Error("joint eigenspace decomposition is incomplete");

  JointSignature sig = make_joint(tag, pairs);
  const auto [p, q] = canonical_pair(f, sig);
  const StableMatrix u = StableMatrix::from_dense(inverse(basis.matrix()));
  JointCanonical out{sig, {u, p, a}, {u, q, b}};
  if (!out.first.verify() || !out.second.verify())
    throw Error("joint canonical certificate failed to verify");
  return out;
}

Order3Canonical canonicalize_order3(const StableMatrix& a) {
  auto j = joint_canonicalize(a, identity(a.field()));
  return {j.signature.first(), j.first};
}

Order3Signature product_signature(const JointSignature& j) {
  Order3Signature s{j.tag, 0, 0, 0};
  for (const auto& [e1, e2] : j.pairs) {
    if (j.tag == RootCase::NoXi) {
      s.t_count += !(e1 == 1 && e2 == 2);
      continue;
    }
    const int e = (e1 + e2) % 3;
    if (e == 1) ++s.mxi;
    if (e == 2) ++s.mxi2;
  }
  return s;
}

std::vector<Order3Signature> signatures_up_to(const Field& f, int n) {
  std::vector<Order3Signature> out;
  if (root_case(*f) == RootCase::HasXi) {
    for (int a = 0; a <= n; ++a)
      for (int b = 0; a + b <= n; ++b) out.push_back(Order3Signature::xi(a, b));
  } else {
    for (int t = 0; 2 * t <= n; ++t) out.push_back(Order3Signature::t(t));
  }
  std::sort(out.begin(), out.end());
  return out;
}

int saturated_at(const Order3Signature& d1, const Order3Signature& d2) {
  return d1.dimension() + d2.dimension();
}

std::vector<JointSignature> enumerate_commuting_pair_signatures(const Order3Signature& d1,
                                                                const Order3Signature& d2, int n) {
  if (d1.tag != d2.tag) throw FieldMismatch("signatures of different cases");
  if (d1.dimension() > n || d2.dimension() > n)
    throw SupportTooSmall("signature does not fit in support " + std::to_string(n));
  std::vector<JointSignature> out;
  auto emit = [&](const std::vector<std::pair<std::pair<int, int>, int>>& counts) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [type, c] : counts) pairs.insert(pairs.end(), static_cast<std::size_t>(c), type);
    JointSignature j = make_joint(d1.tag, pairs);
    if (j.dimension() <= n) out.push_back(std::move(j));
  };
  if (d1.tag == RootCase::HasXi) {
    for (int n11 = 0; n11 <= d1.mxi; ++n11)
      for (int n12 = 0; n11 + n12 <= d1.mxi; ++n12)
        for (int n21 = 0; n21 <= d1.mxi2; ++n21)
          for (int n22 = 0; n21 + n22 <= d1.mxi2; ++n22) {
            const int n10 = d1.mxi - n11 - n12, n20 = d1.mxi2 - n21 - n22;
            const int n01 = d2.mxi - n11 - n21, n02 = d2.mxi2 - n12 - n22;
            if (n01 < 0 || n02 < 0) continue;
            emit({{{1, 1}, n11}, {{1, 2}, n12}, {{1, 0}, n10}, {{2, 1}, n21}, {{2, 2}, n22},
                  {{2, 0}, n20}, {{0, 1}, n01}, {{0, 2}, n02}});
          }
  } else {
    for (int n11 = 0; n11 <= d1.t_count; ++n11)
      for (int n12 = 0; n11 + n12 <= d1.t_count; ++n12) {
        const int n10 = d1.t_count - n11 - n12, n01 = d2.t_count - n11 - n12;
        if (n01 < 0) continue;
        emit({{{1, 0}, n10}, {{1, 1}, n11}, {{1, 2}, n12}, {{0, 1}, n01}});
      }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<JointSignature> enumerate_commuting_pair_signatures(const Order3Signature& d, int n) {
  return enumerate_commuting_pair_signatures(d, d, n);
}

bool ClassCountReport::witnesses_verify() const {
  if (count != static_cast<int>(products.size()) || witnesses.size() != products.size()) return false;
  for (std::size_t i = 0; i < products.size(); ++i) {
    const auto& [a, b] = witnesses[i];
    const StableMatrix d = canonical_matrix(a.field(), input);
    if (!similar(a, d) || !similar(b, d) || !commute(a, b)) return false;
    if (canonicalize_order3(a * b).signature != products[i]) return false;
  }
  return std::adjacent_find(products.begin(), products.end(),
                            [](const auto& x, const auto& y) { return !(x < y); }) == products.end();
}

ClassCountReport class_count_products(const Field& f, const Order3Signature& d, int n) {
  require_case(*f, d.tag);
  ClassCountReport r{d, {}, 0, {}, n, n >= saturated_at(d, d)};
  std::map<Order3Signature, std::pair<StableMatrix, StableMatrix>> found;
  for (const auto& j : enumerate_commuting_pair_signatures(d, n)) {
    const auto sig = product_signature(j);
    if (!found.count(sig)) found.emplace(sig, canonical_pair(f, j));
  }
  for (auto& [sig, w] : found) {
    r.products.push_back(sig);
    r.witnesses.push_back(std::move(w));
  }
  r.count = static_cast<int>(r.products.size());
  return r;
}

ClassCountReport class_count_products_bruteforce(const Field& f, const Order3Signature& d, int n,
                                                 const BruteForceOptions& options) {
  const StableMatrix a = canonical_matrix(f, d);
  if (a.support() > n) throw SupportTooSmall("canonical matrix does not fit in support " + std::to_string(n));
  const auto basis = centralizer_basis(f, {a}, n);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (total > options.budget / f->order() + 1) throw BudgetExceeded("centralizer scan exceeds budget");
    total *= f->order();
  }
  if (total > options.budget)
    throw BudgetExceeded("centralizer scan of " + std::to_string(total) + " elements exceeds budget " +
                         std::to_string(options.budget));

  const std::string a_key = stable_class_key(a);
  const Dense zero(f, n, n);
  const StableMatrix e = identity(f);
  using Found = std::map<std::string, std::uint64_t>;
  auto scan = [&](std::uint64_t lo, std::uint64_t hi, Found& out) {
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      const Dense x = span_element(basis, zero, idx);
      if (determinant(x) == 0) continue;
      const StableMatrix b = StableMatrix::from_dense(x);
      if (power(b, 3) != e || stable_class_key(b) != a_key) continue;
      out.try_emplace(stable_class_key(a * b), idx);
    }
  };

  Found merged;
  if (!options.parallel) {
    scan(0, total, merged);
  } else {
    const int threads = std::max(1, omp_get_max_threads());
    std::vector<Found> partial(static_cast<std::size_t>(threads));
#pragma omp parallel num_threads(threads)
    {
      const auto t = static_cast<std::uint64_t>(omp_get_thread_num());
      const auto w = static_cast<std::uint64_t>(omp_get_num_threads());
      scan(total * t / w, total * (t + 1) / w, partial[t]);
    }
    for (const auto& p : partial)
      for (const auto& [key, idx] : p) {
        auto [it, inserted] = merged.try_emplace(key, idx);
        if (!inserted) it->second = std::min(it->second, idx);
      }
  }

  ClassCountReport r{d, {}, 0, {}, n, false};
  std::map<Order3Signature, std::pair<StableMatrix, StableMatrix>> by_sig;
  for (const auto& [key, idx] : merged) {
    const StableMatrix b = StableMatrix::from_dense(span_element(basis, zero, idx));
    by_sig.emplace(canonicalize_order3(a * b).signature, std::make_pair(a, b));
  }
  if (by_sig.size() != merged.size()) throw Error("product classes and signatures disagree");
  for (auto& [sig, w] : by_sig) {
    r.products.push_back(sig);
    r.witnesses.push_back(std::move(w));
  }
  r.count = static_cast<int>(r.products.size());
  return r;
}

Dense order3_2x2_matrix(const Field& f, Code a, Code b) {
  Dense m(f, 2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = b;
  m.at(1, 1) = a ^ b;
  return m;
}

std::vector<std::pair<Code, Code>> order3_2x2_solutions(const FieldSpec& f) {
  std::vector<std::pair<Code, Code>> out;
  // Entries of M^2 and M^3 for M = [[a,b],[b,a+b]], written out directly.
  for (unsigned a = 0; a < f.order(); ++a)
    for (unsigned b = 0; b < f.order(); ++b) {
      const Code x = static_cast<Code>(a), y = static_cast<Code>(b), s = static_cast<Code>(a ^ b);
      const Code p00 = f.add(f.mul(x, x), f.mul(y, y)), p01 = f.add(f.mul(x, y), f.mul(y, s));
      const Code p11 = f.add(f.mul(y, y), f.mul(s, s));
      const Code c00 = f.add(f.mul(p00, x), f.mul(p01, y));
      const Code c01 = f.add(f.mul(p00, y), f.mul(p01, s));
      const Code c10 = f.add(f.mul(p01, x), f.mul(p11, y));
      const Code c11 = f.add(f.mul(p01, y), f.mul(p11, s));
      if (c00 == 1 && c01 == 0 && c10 == 0 && c11 == 1) out.emplace_back(x, y);
    }
  return out;
}

}  // namespace stablegl
