#include "doctest.h"
#include "fflab/poly.hpp"
#include "oracle.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

using fflab::Field;
using fflab::MonicRange;
using fflab::Poly;
using fflab::format_poly;
using fflab::parse_poly;

namespace {
Poly P(const Field& f, const char* text) { return parse_poly(text, f); }
}  // namespace

TEST_CASE("degree sentinel orders below every finite degree") {
  const Field f = Field::make(3);
  const Poly zero(f);
  CHECK(zero.degree().is_minus_infinity());
  CHECK(zero.degree() < P(f, "1").degree());
  CHECK(zero.degree() < std::size_t{0});
  CHECK_THROWS_AS(zero.deg(), std::domain_error);
  CHECK(P(f, "1,2").deg() == 1);
}

TEST_CASE("ring_ops examples") {
  const Field f2 = Field::make(2);
  CHECK(fflab::gcd(P(f2, "0,1,1"), P(f2, "1,0,1")) == P(f2, "1,1"));
  const Field f3 = Field::make(3);
  CHECK(P(f3, "1,1") * P(f3, "2,1") == P(f3, "2,0,1"));
  CHECK(fflab::gcd(P(f3, "2,0,2"), Poly(f3)) == P(f3, "1,0,1"));
  CHECK(fflab::gcd(Poly(f3), Poly(f3)).is_zero());
  CHECK_THROWS_AS(fflab::divrem(P(f3, "1,1"), Poly(f3)), std::domain_error);
}

TEST_CASE("powmod agrees with repeated multiplication") {
  const Field f5 = Field::make(5);
  const Poly m = P(f5, "2,0,1,1");
  const Poly b = P(f5, "3,1");
  Poly acc = P(f5, "1");
  for (std::uint64_t e = 0; e < 40; ++e) {
    CHECK(fflab::powmod(b, e, m) == acc % m);
    acc = (acc * b) % m;
  }
}

TEST_CASE("divrem contract holds exhaustively on small cases") {
  const Field f3 = Field::make(3);
  const auto dividends = oracle::residues(f3, 4);
  const auto divisors = oracle::residues(f3, 3);
  for (const Poly& a : dividends) {
    for (const Poly& b : divisors) {
      if (b.is_zero()) continue;
      const auto [quot, rem] = fflab::divrem(a, b);
      CHECK(b * quot + rem == a);
      CHECK(rem.degree() < b.degree());
    }
  }
}

TEST_CASE("divrem contract holds on random polynomials over F_4 and F_7") {
  std::mt19937_64 rng(20261019);
  for (const Field& f : {Field::make(2, 2), Field::make(7)}) {
    std::uniform_int_distribution<fflab::Elem> coeff(0, f.q() - 1);
    std::uniform_int_distribution<int> len(0, 12);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<fflab::Elem> ac(len(rng)), bc(len(rng) / 2 + 1);
      for (auto& c : ac) c = coeff(rng);
      for (auto& c : bc) c = coeff(rng);
      const Poly a(f, ac), b(f, bc);
      if (b.is_zero()) continue;
      const auto [quot, rem] = fflab::divrem(a, b);
      CHECK(b * quot + rem == a);
      CHECK(rem.degree() < b.degree());
    }
  }
}

TEST_CASE("parse_poly and format_poly") {
  const Field f3 = Field::make(3);
  const Poly f = P(f3, "1,0,2,1");
  CHECK(f.deg() == 3);
  CHECK(f[0] == 1);
  CHECK(f[2] == 2);
  CHECK(f.is_monic());
  CHECK(P(f3, "0").is_zero());
  CHECK(format_poly(Poly(f3)) == "0");
  CHECK(format_poly(P(f3, "1,2,0,0")) == "1,2");

  const Field f5 = Field::make(5);
  CHECK_THROWS_AS(P(f5, "1,7"), std::invalid_argument);
  CHECK_THROWS_AS(P(f5, "1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(P(f5, ""), std::invalid_argument);
  CHECK_THROWS_AS(P(f5, "1, 2"), std::invalid_argument);
  CHECK_THROWS_AS(P(f5, "1/0"), std::invalid_argument);

  const Field f4 = Field::make(2, 2);
  const Poly g = P(f4, "1/0,0/1");
  CHECK(g[0] == 1);
  CHECK(g[1] == 2);
  CHECK(format_poly(g) == "1/0,0/1");
  CHECK(P(f4, "1,1") == P(f4, "1/0,1/0"));
  CHECK_THROWS_AS(P(f4, "2"), std::invalid_argument);
  CHECK_THROWS_AS(P(f4, "1/0/1"), std::invalid_argument);
}

TEST_CASE("parse(format(f)) = f over prime and extension fields") {
  for (const Field& f : {Field::make(5), Field::make(3, 2), Field::make(2, 3)}) {
    for (const Poly& g : oracle::residues(f, 3)) CHECK(parse_poly(format_poly(g), f) == g);
  }
}

TEST_CASE("enumerate_monic examples") {
  const Field f2 = Field::make(2);
  const MonicRange all = MonicRange::all(f2, 2);
  REQUIRE(all.size() == 4);
  CHECK(all.at(0) == P(f2, "0,0,1"));
  CHECK(all.at(1) == P(f2, "1,0,1"));
  CHECK(all.at(2) == P(f2, "0,1,1"));
  CHECK(all.at(3) == P(f2, "1,1,1"));

  const Field f3 = Field::make(3);
  const MonicRange cls = MonicRange::congruent(f3, 2, P(f3, "0,1"), P(f3, "1"));
  REQUIRE(cls.size() == 3);
  CHECK(cls.at(0) == P(f3, "1,0,1"));
  CHECK(cls.at(1) == P(f3, "1,1,1"));
  CHECK(cls.at(2) == P(f3, "1,2,1"));

  const MonicRange one = MonicRange::all(f3, 0);
  REQUIRE(one.size() == 1);
  CHECK(one.at(0) == P(f3, "1"));
}

TEST_CASE("constrained enumeration below the modulus degree") {
  const Field f3 = Field::make(3);
  const Poly q = P(f3, "1,0,0,1");
  CHECK_THROWS_AS(MonicRange::congruent(f3, 2, q, P(f3, "1,1")), std::invalid_argument);
  const MonicRange single = MonicRange::congruent(f3, 2, q, P(f3, "1,1,1"));
  REQUIRE(single.size() == 1);
  CHECK(single.at(0) == P(f3, "1,1,1"));
  CHECK(MonicRange::congruent_or_empty(f3, 2, q, P(f3, "1,1")).size() == 0);
  CHECK_THROWS_AS(MonicRange::congruent(f3, 2, P(f3, "2"), P(f3, "1")), std::invalid_argument);
}

TEST_CASE("enumeration counts are q^n and q^(n - deg Q)") {
  for (std::uint32_t p : {2U, 3U, 5U, 7U}) {
    const Field f = Field::make(p);
    for (std::size_t n = 0; n <= 6; ++n) {
      if (p == 7 && n == 6) continue;  // 117649 elements: covered by the all() arithmetic below
      std::uint64_t expect = 1;
      for (std::size_t i = 0; i < n; ++i) expect *= p;
      const MonicRange all = MonicRange::all(f, n);
      CHECK(all.size() == expect);
      std::uint64_t walked = 0;
      all.for_each([&](const Poly& g) {
        walked += (g.is_monic() && g.deg() == n) ? 1 : 0;
      });
      CHECK(walked == expect);
      if (n >= 2) {
        const Poly q = P(f, "1,0,1");
        const MonicRange cls = MonicRange::congruent(f, n, q, P(f, "1,1"));
        CHECK(cls.size() == expect / (p * p));
        cls.for_each([&](const Poly& g) { CHECK(g % q == P(f, "1,1")); });
      }
    }
  }
  // The extension-field case.
  const Field f4 = Field::make(2, 2);
  CHECK(MonicRange::all(f4, 3).size() == 64);
}

TEST_CASE("residue classes partition M_3 over F_3 for Q = t^2+1") {
  const Field f3 = Field::make(3);
  const Poly q = P(f3, "1,0,1");
  std::multiset<std::uint64_t> seen;
  for (const Poly& a : oracle::residues(f3, 2)) {
    MonicRange::congruent(f3, 3, q, a).for_each([&](const Poly& g) { seen.insert(fflab::monic_index(g)); });
  }
  std::multiset<std::uint64_t> expected;
  MonicRange::all(f3, 3).for_each([&](const Poly& g) { expected.insert(fflab::monic_index(g)); });
  CHECK(seen == expected);
  CHECK(seen.size() == 27);
}

TEST_CASE("split covers the range in order with disjoint blocks") {
  const Field f3 = Field::make(3);
  const MonicRange cls = MonicRange::congruent(f3, 5, P(f3, "0,1"), P(f3, "2"));
  for (std::size_t blocks : {1U, 2U, 3U, 5U, 9U, 100U}) {
    std::vector<std::uint64_t> joined;
    for (const auto& piece : cls.split(blocks)) piece.for_each([&](const Poly& g) { joined.push_back(fflab::monic_index(g)); });
    std::vector<std::uint64_t> direct;
    cls.for_each([&](const Poly& g) { direct.push_back(fflab::monic_index(g)); });
    CHECK(joined == direct);
    CHECK(cls.split(blocks).size() <= blocks);
  }
}

TEST_CASE("monic and residue indices invert") {
  const Field f4 = Field::make(2, 2);
  for (std::uint64_t i = 0; i < 64; ++i) {
    CHECK(fflab::monic_index(fflab::monic_from_index(f4, 3, i)) == i);
    CHECK(fflab::residue_index(fflab::residue_from_index(f4, 3, i), 3) == i);
  }
  CHECK_THROWS_AS(fflab::monic_index(P(f4, "1,2")), std::invalid_argument);
}

TEST_CASE("IndexShifter adds the offset") {
  const Field f5 = Field::make(5);
  const Poly k = P(f5, "3,0,4");
  const fflab::IndexShifter shift(k, 4);
  for (std::uint64_t i = 0; i < 625; ++i) {
    const Poly f = fflab::monic_from_index(f5, 4, i);
    CHECK(shift(i) == fflab::monic_index(f + k));
  }
  CHECK_THROWS_AS(fflab::IndexShifter(P(f5, "0,0,0,0,1"), 4), std::invalid_argument);
}
