#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stablegl/field.hpp"

namespace stablegl {

// Univariate polynomial over GF(2^k); coefficients stored low degree first
// with no trailing zeros.
class Poly {
 public:
  explicit Poly(Field f) : field_(std::move(f)) {}
  Poly(Field f, std::vector<Code> coeffs);

  static Poly constant(Field f, Code c) { return Poly(std::move(f), {c}); }
  static Poly monomial(Field f, int degree, Code c = 1);
  // (lambda - root)
  static Poly linear(Field f, Code root);

  const Field& field() const { return field_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_one() const { return coeffs_.size() == 1 && coeffs_[0] == 1; }
  Code coeff(int i) const {
    return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[static_cast<std::size_t>(i)] : 0;
  }
  Code lead() const { return coeffs_.empty() ? 0 : coeffs_.back(); }
  const std::vector<Code>& coeffs() const { return coeffs_; }

  Poly operator+(const Poly& b) const;
  Poly operator-(const Poly& b) const { return *this + b; }
  Poly operator*(const Poly& b) const;
  Poly scaled(Code c) const;
  Poly monic() const;
  // Quotient and remainder; throws DivisionByZero on a zero divisor.
  std::pair<Poly, Poly> divmod(const Poly& b) const;
  Poly operator/(const Poly& b) const { return divmod(b).first; }
  Poly operator%(const Poly& b) const { return divmod(b).second; }
  Code eval(Code x) const;

  bool operator==(const Poly& b) const {
    return same_field(field_, b.field_) && coeffs_ == b.coeffs_;
  }
  bool operator!=(const Poly& b) const { return !(*this == b); }

  // e.g. "lambda^2 + lambda + 1"; non-unit coefficients in integer form.
  std::string to_string(const std::string& var = "lambda") const;

 private:
  void normalize();

  Field field_;
  std::vector<Code> coeffs_;
};

// Monic gcd (zero only when both are zero).
Poly gcd(const Poly& a, const Poly& b);
Poly lcm(const Poly& a, const Poly& b);

}  // namespace stablegl
