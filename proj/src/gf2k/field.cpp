#include "stablegl/field.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "stablegl/error.hpp"

namespace stablegl {

namespace {

constexpr std::array<std::uint32_t, kMaxDegree + 1> kDefaultModuli = {
    0,        // unused
    0x3,      // x+1
    0x7,      // x^2+x+1
    0xB,      // x^3+x+1
    0x13,     // x^4+x+1
    0x25,     // x^5+x^2+1
    0x43,     // x^6+x+1
    0x83,     // x^7+x+1
    0x11D,    // x^8+x^4+x^3+x^2+1
    0x211,    // x^9+x^4+1
    0x409,    // x^10+x^3+1
    0x805,    // x^11+x^2+1
    0x1053,   // x^12+x^6+x^4+x+1
    0x201B,   // x^13+x^4+x^3+x+1
    0x4443,   // x^14+x^10+x^6+x+1
    0x8003,   // x^15+x+1
    0x1100B,  // x^16+x^12+x^3+x+1
};

int bit_degree(std::uint32_t p) {
  int d = -1;
  while (p) {
    ++d;
    p >>= 1;
  }
  return d;
}

std::uint32_t gf2_mod(std::uint32_t a, std::uint32_t b) {
  const int db = bit_degree(b);
  for (int da = bit_degree(a); da >= db; da = bit_degree(a)) a ^= b << (da - db);
  return a;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// Parses "x^3+x+1" style polynomials over GF(2) (repeated terms cancel).
std::uint32_t parse_gf2_poly(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error("empty polynomial");
  std::uint32_t value = 0;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find('+', pos);
    if (end == std::string::npos) end = s.size();
    std::string_view term(s.data() + pos, end - pos);
    if (term.empty()) throw Error("malformed polynomial '" + std::string(text) + "'");
    int exponent = 0;
    if (term == "1") {
      exponent = 0;
    } else if (term == "0") {
      exponent = -1;
    } else if (term == "x") {
      exponent = 1;
    } else if (term.size() > 2 && term[0] == 'x' && term[1] == '^') {
      auto digits = term.substr(2);
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exponent);
      if (ec != std::errc() || p != digits.data() + digits.size() || exponent > 31)
        throw Error("malformed exponent in '" + std::string(text) + "'");
    } else {
      throw Error("malformed polynomial term '" + std::string(term) + "'");
    }
    if (exponent >= 0) value ^= std::uint32_t{1} << exponent;
    pos = end + 1;
  }
  return value;
}

}  // namespace

std::uint32_t default_modulus(int k) {
  if (k < 1 || k > kMaxDegree)
    throw DegreeOutOfRange("field degree " + std::to_string(k) + " outside 1.." +
                           std::to_string(kMaxDegree));
  return kDefaultModuli[static_cast<std::size_t>(k)];
}

std::uint32_t clmul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t modulus) {
  const int k = bit_degree(modulus);
  std::uint64_t acc = 0;
  for (int i = 0; i < 32; ++i)
    if (b & (std::uint32_t{1} << i)) acc ^= std::uint64_t{a} << i;
  for (int d = 63; d >= k; --d)
    if (acc & (std::uint64_t{1} << d)) acc ^= std::uint64_t{modulus} << (d - k);
  return static_cast<std::uint32_t>(acc);
}

std::uint32_t find_factor(std::uint32_t poly) {
  const int n = bit_degree(poly);
  for (int d = 1; 2 * d <= n; ++d) {
    for (std::uint32_t low = 0; low < (std::uint32_t{1} << d); ++low) {
      const std::uint32_t candidate = (std::uint32_t{1} << d) | low;
      if (gf2_mod(poly, candidate) == 0) return candidate;
    }
  }
  return 0;
}

std::string format_gf2_poly(std::uint32_t poly, char var) {
  if (poly == 0) return "0";
  std::string out;
  for (int d = bit_degree(poly); d >= 0; --d) {
    if (!(poly & (std::uint32_t{1} << d))) continue;
    if (!out.empty()) out += '+';
    if (d == 0)
      out += '1';
    else if (d == 1)
      out += var;
    else
      out += std::string(1, var) + "^" + std::to_string(d);
  }
  return out;
}

FieldSpec::FieldSpec(int degree, std::uint32_t modulus)
    : degree_(degree), modulus_(modulus) {
  const std::uint32_t q = order();
  const std::uint32_t units = q - 1;
  // Generator search: g has order q-1 iff g^((q-1)/p) != 1 for primes p | q-1.
  std::vector<std::uint32_t> primes;
  {
    std::uint32_t m = units;
    for (std::uint32_t p = 2; p * p <= m; ++p) {
      if (m % p) continue;
      primes.push_back(p);
      while (m % p == 0) m /= p;
    }
    if (m > 1) primes.push_back(m);
  }
  auto slow_pow = [&](std::uint32_t g, std::uint32_t e) {
    std::uint32_t r = 1;
    std::uint32_t base = g;
    while (e) {
      if (e & 1) r = clmul_mod(r, base, modulus_);
      base = clmul_mod(base, base, modulus_);
      e >>= 1;
    }
    return r;
  };
  std::uint32_t generator = 1;
  for (std::uint32_t g = 1; g < q; ++g) {
    bool ok = true;
    for (auto p : primes)
      if (slow_pow(g, units / p) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      generator = g;
      break;
    }
  }
  exp_.assign(2 * static_cast<std::size_t>(units), 0);
  log_.assign(q, 0);
  std::uint32_t cur = 1;
  for (std::uint32_t i = 0; i < units; ++i) {
    exp_[i] = static_cast<Code>(cur);
    exp_[i + units] = static_cast<Code>(cur);
    log_[cur] = i;
    cur = clmul_mod(cur, generator, modulus_);
  }
  for (std::uint32_t a = 1; a < q; ++a) {
    const Code c = static_cast<Code>(a);
    if (mul(mul(c, c), c) == 1) cube_roots_.push_back(c);
  }
}

Code FieldSpec::inv(Code a) const {
  if (a == 0) throw DivisionByZero("inverse of zero in " + name());
  const std::uint32_t units = order() - 1;
  return exp_[(units - log_[a]) % units];
}

Code FieldSpec::pow(Code a, long long e) const {
  if (e == 0) return 1;
  if (a == 0) {
    if (e < 0) throw DivisionByZero("negative power of zero in " + name());
    return 0;
  }
  const long long units = order() - 1;
  long long r = (static_cast<long long>(log_[a]) * (e % units)) % units;
  if (r < 0) r += units;
  return exp_[static_cast<std::size_t>(r)];
}

Code FieldSpec::xi() const {
  if (!has_xi()) throw Error(name() + " has no nontrivial cube root of unity");
  return cube_roots_[1];
}

bool FieldSpec::is_default_modulus() const {
  return kDefaultModuli[static_cast<std::size_t>(degree_)] == modulus_;
}

std::string FieldSpec::name() const {
  std::string s = "gf(" + std::to_string(order());
  if (!is_default_modulus()) s += ", " + format_gf2_poly(modulus_);
  return s + ")";
}

Field field_make(int k, std::optional<std::uint32_t> modulus) {
  if (k < 1 || k > kMaxDegree)
    throw DegreeOutOfRange("field degree " + std::to_string(k) + " outside 1.." +
                           std::to_string(kMaxDegree));
  const std::uint32_t m = modulus.value_or(kDefaultModuli[static_cast<std::size_t>(k)]);
  if (bit_degree(m) != k)
    throw Error("modulus " + format_gf2_poly(m) + " is not monic of degree " +
                std::to_string(k));
  if (const std::uint32_t f = find_factor(m); f != 0)
    throw ReducibleModulus("modulus " + format_gf2_poly(m) + " is reducible: factor " +
                               format_gf2_poly(f),
                           f);
  return Field(new FieldSpec(k, m));
}

bool same_field(const Field& a, const Field& b) {
  return a.get() == b.get() || (a && b && a->same_as(*b));
}

void require_same_field(const Field& a, const Field& b) {
  if (!same_field(a, b))
    throw FieldMismatch("field mismatch: " + (a ? a->name() : "null") + " vs " +
                        (b ? b->name() : "null"));
}

FieldElement::FieldElement(Field field, Code value) : field_(std::move(field)), value_(value) {
  if (value_ >= field_->order())
    throw Error("element code " + std::to_string(value_) + " out of range for " +
                field_->name());
}

FieldElement FieldElement::operator+(const FieldElement& b) const {
  require_same_field(field_, b.field_);
  return {field_, field_->add(value_, b.value_)};
}

FieldElement FieldElement::operator*(const FieldElement& b) const {
  require_same_field(field_, b.field_);
  return {field_, field_->mul(value_, b.value_)};
}

FieldElement FieldElement::operator/(const FieldElement& b) const {
  require_same_field(field_, b.field_);
  return {field_, field_->div(value_, b.value_)};
}

FieldElement FieldElement::inv() const { return {field_, field_->inv(value_)}; }

FieldElement FieldElement::pow(long long e) const { return {field_, field_->pow(value_, e)}; }

FieldElement zero(const Field& f) { return {f, 0}; }
FieldElement one(const Field& f) { return {f, 1}; }

std::vector<FieldElement> cube_roots_of_unity(const Field& f) {
  std::vector<FieldElement> out;
  for (Code c : f->cube_roots()) out.emplace_back(f, c);
  return out;
}

std::vector<FieldElement> enumerate_elements(const Field& f) {
  std::vector<FieldElement> out;
  out.reserve(f->order());
  for (std::uint32_t v = 0; v < f->order(); ++v) out.emplace_back(f, static_cast<Code>(v));
  return out;
}

Field parse_field(std::string_view text) {
  auto s = trim(text);
  if (s.size() < 4 || s.substr(0, 3) != "gf(" || s.back() != ')')
    throw Error("malformed field literal '" + std::string(text) + "'");
  auto inner = s.substr(3, s.size() - 4);
  std::optional<std::uint32_t> modulus;
  if (auto comma = inner.find(','); comma != std::string_view::npos) {
    modulus = parse_gf2_poly(inner.substr(comma + 1));
    inner = inner.substr(0, comma);
  }
  inner = trim(inner);
  unsigned long long q = 0;
  auto [p, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), q);
  if (ec != std::errc() || p != inner.data() + inner.size() || q < 2 || (q & (q - 1)))
    throw Error("field order in '" + std::string(text) + "' is not a power of two >= 2");
  int k = 0;
  while ((1ull << k) < q) ++k;
  return field_make(k, modulus);
}

Code parse_element(const FieldSpec& f, std::string_view text) {
  auto s = trim(text);
  if (s.empty()) throw Error("empty field element");
  std::uint32_t value = 0;
  if (std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc()) throw Error("malformed field element '" + std::string(s) + "'");
  } else {
    value = parse_gf2_poly(s);
  }
  if (value >= f.order()) {
    // Polynomial forms of degree >= k are reduced; integer forms must be in range.
    if (std::isdigit(static_cast<unsigned char>(s.front())) &&
        std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw Error("element " + std::string(s) + " out of range for " + f.name());
    value = gf2_mod(value, f.modulus());
  }
  return static_cast<Code>(value);
}

std::string format_element(Code value) { return std::to_string(value); }

}  // namespace stablegl
