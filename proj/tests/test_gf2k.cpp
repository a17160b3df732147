#include "doctest.h"
#include "stablegl/error.hpp"
#include "stablegl/field.hpp"
#include "support.hpp"

using namespace stablegl;
using stablegl::testing::slow_mul;

TEST_CASE("field_make uses the pinned default table") {
  CHECK(field_make(1)->modulus() == 0x3);
  CHECK(field_make(2)->modulus() == 0x7);
  CHECK(field_make(3)->modulus() == 0xB);
  CHECK(field_make(4)->modulus() == 0x13);
  CHECK(field_make(2)->name() == "gf(4)");
}

TEST_CASE("field_make rejects reducible moduli and naming the factor") {
  try {
    field_make(2, 0x5);  // x^2+1 = (x+1)^2
    FAIL("expected ReducibleModulus");
  } catch (const ReducibleModulus& e) {
    CHECK(e.factor() == 0x3);
  }
  CHECK_THROWS_AS(field_make(4, 0x15), ReducibleModulus);  // x^4+x^2+1 = (x^2+x+1)^2
  CHECK_NOTHROW(field_make(3, 0xB));
  CHECK_THROWS_AS(field_make(0), DegreeOutOfRange);
  CHECK_THROWS_AS(field_make(17), DegreeOutOfRange);
}

TEST_CASE("trial division oracle: every default modulus is irreducible") {
  for (int k = 1; k <= kMaxDegree; ++k) {
    const auto m = default_modulus(k);
    // Independent check: no polynomial of degree 1..k/2 divides m.
    for (std::uint32_t d = 2; d < (1u << (k / 2 + 1)); ++d) {
      std::uint32_t a = m;
      int dd = 31 - __builtin_clz(d);
      while (a && (31 - __builtin_clz(a)) >= dd) a ^= d << ((31 - __builtin_clz(a)) - dd);
      CHECK_MESSAGE(a != 0, "k=" << k << " divisor " << d);
    }
  }
}

TEST_CASE("GF(4) arithmetic examples") {
  auto f = field_make(2);
  FieldElement x(f, 2);
  CHECK((x * x).value() == 3);  // x^2 = x + 1
  CHECK(x.pow(3).value() == 1);
  for (auto a : enumerate_elements(f)) CHECK((a + a).is_zero());
  CHECK_THROWS_AS(zero(f).inv(), DivisionByZero);
  CHECK_THROWS_AS(x * FieldElement(field_make(3), 2), FieldMismatch);
}

TEST_CASE("cube roots of unity by exhaustive cubing") {
  auto oracle = [](const Field& f) {
    std::vector<Code> roots;
    for (std::uint32_t a = 1; a < f->order(); ++a) {
      Code c = static_cast<Code>(a);
      if (slow_mul(*f, slow_mul(*f, c, c), c) == 1) roots.push_back(c);
    }
    return roots;
  };
  CHECK(field_make(1)->cube_roots() == std::vector<Code>{1});
  CHECK(field_make(2)->cube_roots() == std::vector<Code>{1, 2, 3});
  CHECK(field_make(3)->cube_roots() == std::vector<Code>{1});
  for (int k = 1; k <= kMaxDegree; ++k) {
    auto f = field_make(k);
    CHECK(f->cube_roots() == oracle(f));
    CHECK(f->has_xi() == (k % 2 == 0));
  }
}

TEST_CASE("enumerate_elements is lexicographic") {
  auto els = enumerate_elements(field_make(2));
  REQUIRE(els.size() == 4);
  for (unsigned i = 0; i < 4; ++i) CHECK(els[i].value() == i);
  CHECK(enumerate_elements(field_make(1)).size() == 2);
  CHECK(enumerate_elements(field_make(3)).size() == 8);
}

TEST_CASE("table multiplication matches carry-less multiplication") {
  for (int k = 1; k <= 8; ++k) {
    auto f = field_make(k);
    for (std::uint32_t a = 0; a < f->order(); ++a)
      for (std::uint32_t b = 0; b < f->order(); ++b)
        REQUIRE(f->mul(static_cast<Code>(a), static_cast<Code>(b)) ==
                slow_mul(*f, static_cast<Code>(a), static_cast<Code>(b)));
  }
  auto& gen = stablegl::testing::rng();
  for (int k = 9; k <= kMaxDegree; ++k) {
    auto f = field_make(k);
    std::uniform_int_distribution<unsigned> d(0, f->order() - 1);
    for (int t = 0; t < 2000; ++t) {
      Code a = static_cast<Code>(d(gen)), b = static_cast<Code>(d(gen));
      REQUIRE(f->mul(a, b) == slow_mul(*f, a, b));
    }
  }
}

TEST_CASE("field laws: Frobenius, inverses, group order") {
  auto& gen = stablegl::testing::rng();
  for (int k = 1; k <= kMaxDegree; ++k) {
    auto f = field_make(k);
    const std::uint32_t q = f->order();
    std::uniform_int_distribution<unsigned> d(0, q - 1);
    const int samples = k <= 8 ? static_cast<int>(q) : 3000;
    for (int t = 0; t < samples; ++t) {
      Code a = static_cast<Code>(k <= 8 ? static_cast<unsigned>(t) : d(gen));
      Code b = static_cast<Code>(d(gen));
      Code s = f->add(a, b);
      CHECK(f->mul(s, s) == f->add(f->mul(a, a), f->mul(b, b)));
      if (a) {
        CHECK(f->mul(a, f->inv(a)) == 1);
        CHECK(f->pow(a, q - 1) == 1);
      }
    }
  }
}

TEST_CASE("field axioms: exhaustive triples for k <= 4, sampled beyond") {
  auto& gen = stablegl::testing::rng();
  for (int k = 1; k <= kMaxDegree; ++k) {
    auto f = field_make(k);
    const std::uint32_t q = f->order();
    auto check = [&](Code a, Code b, Code c) {
      REQUIRE(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
      REQUIRE(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
      REQUIRE(f->mul(a, b) == f->mul(b, a));
      REQUIRE(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
    };
    if (k <= 4) {
      for (std::uint32_t a = 0; a < q; ++a)
        for (std::uint32_t b = 0; b < q; ++b)
          for (std::uint32_t c = 0; c < q; ++c)
            check(static_cast<Code>(a), static_cast<Code>(b), static_cast<Code>(c));
    } else {
      std::uniform_int_distribution<unsigned> d(0, q - 1);
      for (int t = 0; t < 2000; ++t)
        check(static_cast<Code>(d(gen)), static_cast<Code>(d(gen)), static_cast<Code>(d(gen)));
    }
  }
}

TEST_CASE("field and element literals") {
  auto f4 = parse_field("gf(4)");
  CHECK(f4->degree() == 2);
  auto f8 = parse_field("gf(8, x^3+x+1)");
  CHECK(f8->same_as(*field_make(3)));
  CHECK(f8->name() == "gf(8)");
  auto f8b = parse_field("gf(8, x^3+x^2+1)");
  CHECK(f8b->modulus() == 0xD);
  CHECK(f8b->name() == "gf(8, x^3+x^2+1)");
  CHECK(parse_field(" gf(2) ")->degree() == 1);
  CHECK_THROWS(parse_field("gf(6)"));
  CHECK_THROWS_AS(parse_field("gf(4, x^2+1)"), ReducibleModulus);

  CHECK(parse_element(*f4, "x+1") == 3);
  CHECK(parse_element(*f4, "3") == 3);
  CHECK(parse_element(*f4, "x") == 2);
  CHECK(parse_element(*f4, "x^2") == 3);  // reduced by x^2+x+1
  CHECK(parse_element(*f4, "0") == 0);
  CHECK_THROWS(parse_element(*f4, "4"));
  CHECK_THROWS(parse_element(*f4, "y"));
  CHECK(format_element(3) == "3");
}
