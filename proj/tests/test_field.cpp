#include "doctest.h"
#include "fflab/field.hpp"

#include <stdexcept>
#include <vector>

using fflab::Elem;
using fflab::Field;

TEST_CASE("make_field builds prime fields without a modulus") {
  const Field f3 = Field::make(3, 1);
  CHECK(f3.p() == 3);
  CHECK(f3.nu() == 1);
  CHECK(f3.q() == 3);
  CHECK(f3.modulus().empty());
}

TEST_CASE("make_field picks t^2+t+1 for F_4") {
  const Field f4 = Field::make(2, 2);
  CHECK(f4.q() == 4);
  const std::vector<std::uint32_t> expected{1, 1, 1};
  CHECK(std::vector<std::uint32_t>(f4.modulus().begin(), f4.modulus().end()) == expected);
}

TEST_CASE("modulus is the first irreducible comparing from the constant term") {
  // Over F_3: t^2+1 is irreducible and (1,0) precedes (1,1), (2,0), ...
  const Field f9 = Field::make(3, 2);
  CHECK(std::vector<std::uint32_t>(f9.modulus().begin(), f9.modulus().end()) == std::vector<std::uint32_t>{1, 0, 1});
  // Over F_2 degree 3: t^3+t^2+1 (1,0,1,1) precedes t^3+t+1 (1,1,0,1).
  const Field f8 = Field::make(2, 3);
  CHECK(std::vector<std::uint32_t>(f8.modulus().begin(), f8.modulus().end()) ==
        std::vector<std::uint32_t>{1, 0, 1, 1});
}

TEST_CASE("make_field is deterministic") {
  const Field a = Field::make(5, 2);
  const Field b = Field::make(5, 2);
  CHECK(a == b);
  CHECK(std::vector<std::uint32_t>(a.modulus().begin(), a.modulus().end()) ==
        std::vector<std::uint32_t>(b.modulus().begin(), b.modulus().end()));
}

TEST_CASE("make_field rejects bad parameters") {
  CHECK_THROWS_AS(Field::make(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(Field::make(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(Field::make(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(Field::make(2, 17), std::invalid_argument);
  CHECK_NOTHROW(Field::make(2, 16));
}

TEST_CASE("field_ops examples") {
  const Field f5 = Field::make(5);
  CHECK(f5.inv(2) == 3);
  const Field f3 = Field::make(3);
  CHECK(f3.add(2, 2) == 1);
  // F_4: code 2 is t; t*t = t+1 = code 3.
  const Field f4 = Field::make(2, 2);
  CHECK(f4.mul(2, 2) == 3);
  CHECK_THROWS_AS(f5.inv(0), std::domain_error);
}

TEST_CASE("FieldElem rejects mixed fields") {
  const Field f3 = Field::make(3);
  const Field f5 = Field::make(5);
  CHECK_THROWS_AS(f3.one() + f5.one(), std::invalid_argument);
  CHECK_THROWS_AS(f3.one() * f5.one(), std::invalid_argument);
  CHECK((f5.elem(2) / f5.elem(2)) == f5.one());
  CHECK((-f5.elem(2)) == f5.elem(3));
  CHECK_THROWS_AS(f5.zero().inv(), std::domain_error);
  CHECK_THROWS_AS(f5.elem(5), std::invalid_argument);
}

TEST_CASE("inverse and Frobenius fixed point for every field with q <= 49") {
  for (auto [p, nu] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
           {2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {11, 1}, {13, 1}, {2, 4}, {17, 1},
           {19, 1}, {23, 1}, {5, 2}, {3, 3}, {29, 1}, {31, 1}, {2, 5}, {37, 1}, {41, 1}, {43, 1}, {47, 1}, {7, 2}}) {
    const Field f = Field::make(p, nu);
    CAPTURE(f.q());
    for (Elem x = 0; x < f.q(); ++x) {
      CHECK(f.pow(x, f.q()) == x);
      if (x != 0) CHECK(f.mul(x, f.inv(x)) == 1);
      CHECK(f.add(x, f.neg(x)) == 0);
    }
  }
}

TEST_CASE("field axioms hold exhaustively for q <= 9") {
  for (auto [p, nu] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}}) {
    const Field f = Field::make(p, nu);
    CAPTURE(f.q());
    bool ok = true;
    for (Elem a = 0; a < f.q(); ++a) {
      for (Elem b = 0; b < f.q(); ++b) {
        ok &= f.add(a, b) == f.add(b, a);
        ok &= f.mul(a, b) == f.mul(b, a);
        ok &= f.sub(f.add(a, b), b) == a;
        for (Elem c = 0; c < f.q(); ++c) {
          ok &= f.add(f.add(a, b), c) == f.add(a, f.add(b, c));
          ok &= f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c));
          ok &= f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c));
        }
      }
    }
    CHECK(ok);
  }
}

TEST_CASE("components round-trip through from_components") {
  const Field f27 = Field::make(3, 3);
  for (Elem x = 0; x < f27.q(); ++x) CHECK(f27.from_components(f27.components(x)) == x);
  const std::vector<std::uint32_t> bad{3, 0, 0};
  CHECK_THROWS_AS(f27.from_components(bad), std::invalid_argument);
}

TEST_CASE("integer totient") {
  CHECK(fflab::integer_totient(7) == 6);
  CHECK(fflab::integer_totient(9) == 6);
  CHECK(fflab::integer_totient(4) == 2);
  CHECK(fflab::integer_totient(1) == 1);
}
