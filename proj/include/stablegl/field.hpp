#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stablegl {

// Coordinates of an element of GF(2^k) in the polynomial basis, bit i being
// the coefficient of x^i.
using Code = std::uint16_t;

inline constexpr int kMaxDegree = 16;

// GF(2^k) given by a monic irreducible modulus. Immutable once built; share
// through the Field handle.
class FieldSpec {
 public:
  int degree() const { return degree_; }
  // Bit-packed modulus including the leading x^k term.
  std::uint32_t modulus() const { return modulus_; }
  std::uint32_t order() const { return std::uint32_t{1} << degree_; }

  Code add(Code a, Code b) const { return static_cast<Code>(a ^ b); }
  Code mul(Code a, Code b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Code inv(Code a) const;
  Code div(Code a, Code b) const { return mul(a, inv(b)); }
  Code pow(Code a, long long e) const;

  // Cube roots of unity in increasing code order; 1 is always first.
  const std::vector<Code>& cube_roots() const { return cube_roots_; }
  bool has_xi() const { return cube_roots_.size() == 3; }
  // The smallest nontrivial cube root of unity. Requires has_xi().
  Code xi() const;

  std::string name() const;  // "gf(4)", or "gf(8, x^3+x+1)" off the table
  bool is_default_modulus() const;

  bool same_as(const FieldSpec& other) const {
    return degree_ == other.degree_ && modulus_ == other.modulus_;
  }

 private:
  friend std::shared_ptr<const FieldSpec> field_make(
      int k, std::optional<std::uint32_t> modulus);
  FieldSpec(int degree, std::uint32_t modulus);

  int degree_;
  std::uint32_t modulus_;
  std::vector<Code> exp_;  // doubled so mul needs no reduction
  std::vector<std::uint32_t> log_;
  std::vector<Code> cube_roots_;
};

using Field = std::shared_ptr<const FieldSpec>;

// Pinned default moduli, bit-packed. Index by degree (1..16).
std::uint32_t default_modulus(int k);

// Builds GF(2^k). Without a modulus the pinned default is used.
// Throws DegreeOutOfRange, ReducibleModulus.
Field field_make(int k, std::optional<std::uint32_t> modulus = std::nullopt);

// Carry-less product of two polynomials over GF(2) reduced by `modulus`.
std::uint32_t clmul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t modulus);

// Returns a nontrivial factor of `poly` found by trial division against monic
// polynomials of degree <= deg/2, or 0 when `poly` is irreducible.
std::uint32_t find_factor(std::uint32_t poly);

std::string format_gf2_poly(std::uint32_t poly, char var = 'x');

bool same_field(const Field& a, const Field& b);
void require_same_field(const Field& a, const Field& b);

// Value type carrying its field.
class FieldElement {
 public:
  FieldElement(Field field, Code value);

  const Field& field() const { return field_; }
  Code value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement operator+(const FieldElement& b) const;
  FieldElement operator-(const FieldElement& b) const { return *this + b; }
  FieldElement operator*(const FieldElement& b) const;
  FieldElement operator/(const FieldElement& b) const;
  FieldElement inv() const;
  FieldElement pow(long long e) const;

  bool operator==(const FieldElement& b) const {
    return same_field(field_, b.field_) && value_ == b.value_;
  }

 private:
  Field field_;
  Code value_;
};

FieldElement zero(const Field& f);
FieldElement one(const Field& f);

std::vector<FieldElement> cube_roots_of_unity(const Field& f);
std::vector<FieldElement> enumerate_elements(const Field& f);

// "gf(4)" or "gf(8, x^3+x+1)".
Field parse_field(std::string_view text);
// Polynomial in x ("x^2+1") or a non-negative integer ("5").
Code parse_element(const FieldSpec& f, std::string_view text);
std::string format_element(Code value);

}  // namespace stablegl
