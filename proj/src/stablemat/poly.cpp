#include "stablegl/poly.hpp"

#include <algorithm>

#include "stablegl/error.hpp"

namespace stablegl {

Poly::Poly(Field f, std::vector<Code> coeffs) : field_(std::move(f)), coeffs_(std::move(coeffs)) {
  normalize();
}

Poly Poly::monomial(Field f, int degree, Code c) {
  std::vector<Code> v(static_cast<std::size_t>(degree) + 1, 0);
  v.back() = c;
  return Poly(std::move(f), std::move(v));
}

Poly Poly::linear(Field f, Code root) { return Poly(std::move(f), {root, 1}); }

void Poly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Poly Poly::operator+(const Poly& b) const {
  require_same_field(field_, b.field_);
  std::vector<Code> out(std::max(coeffs_.size(), b.coeffs_.size()), 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out[i] ^= b.coeffs_[i];
  return Poly(field_, std::move(out));
}

Poly Poly::operator*(const Poly& b) const {
  require_same_field(field_, b.field_);
  if (is_zero() || b.is_zero()) return Poly(field_);
  std::vector<Code> out(coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!coeffs_[i]) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      out[i + j] ^= field_->mul(coeffs_[i], b.coeffs_[j]);
  }
  return Poly(field_, std::move(out));
}

Poly Poly::scaled(Code c) const {
  std::vector<Code> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] = field_->mul(coeffs_[i], c);
  return Poly(field_, std::move(out));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(field_->inv(lead()));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& b) const {
  require_same_field(field_, b.field_);
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  std::vector<Code> rem = coeffs_;
  const int db = b.degree();
  if (degree() < db) return {Poly(field_), *this};
  std::vector<Code> quot(static_cast<std::size_t>(degree() - db) + 1, 0);
  const Code inv_lead = field_->inv(b.lead());
  for (int d = degree(); d >= db; --d) {
    const Code c = rem[static_cast<std::size_t>(d)];
    if (!c) continue;
    const Code f = field_->mul(c, inv_lead);
    quot[static_cast<std::size_t>(d - db)] = f;
    for (int i = 0; i <= db; ++i)
      rem[static_cast<std::size_t>(d - db + i)] ^= field_->mul(f, b.coeffs_[static_cast<std::size_t>(i)]);
  }
  return {Poly(field_, std::move(quot)), Poly(field_, std::move(rem))};
}

Code Poly::eval(Code x) const {
  Code acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = field_->add(field_->mul(acc, x), *it);
  return acc;
}

std::string Poly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  for (int d = degree(); d >= 0; --d) {
    const Code c = coeff(d);
    if (!c) continue;
    if (!out.empty()) out += " + ";
    std::string mono = d == 0 ? "" : (d == 1 ? var : var + "^" + std::to_string(d));
    if (d == 0)
      out += std::to_string(c);
    else if (c == 1)
      out += mono;
    else
      out += std::to_string(c) + "*" + mono;
  }
  return out;
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Poly lcm(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly(a.field());
  return ((a * b) / gcd(a, b)).monic();
}

}  // namespace stablegl
