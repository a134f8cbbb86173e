#include "doctest.h"
#include "fflab/singular.hpp"
#include "oracle.hpp"

#include <stdexcept>

using fflab::Decimal;
using fflab::Field;
using fflab::Poly;
using fflab::TupleOffsets;
using fflab::parse_poly;

namespace {
Poly P(const Field& f, const char* text) { return parse_poly(text, f); }

TupleOffsets tuple(const Field& f, std::initializer_list<const char*> texts) {
  std::vector<Poly> h;
  for (const char* t : texts) h.push_back(P(f, t));
  return TupleOffsets(h);
}

double as_double(const Decimal& d) { return d.convert_to<double>(); }
}  // namespace

TEST_CASE("TupleOffsets rejects degenerate tuples") {
  const Field f3 = Field::make(3);
  CHECK_THROWS_AS(TupleOffsets({}), std::invalid_argument);
  CHECK_THROWS_AS(tuple(f3, {"1", "1"}), std::invalid_argument);
  CHECK_THROWS_AS(TupleOffsets({P(f3, "1"), parse_poly("1", Field::make(5))}), std::invalid_argument);
}

TEST_CASE("nu_count examples") {
  const Field f3 = Field::make(3);
  CHECK(fflab::nu_count(P(f3, "0,1"), tuple(f3, {"0", "1"})) == 2);
  CHECK(fflab::nu_count(P(f3, "1,0,1"), tuple(f3, {"2,1"})) == 1);
  CHECK(fflab::nu_count(P(f3, "1,1"), tuple(f3, {"0", "1,1"})) == 1);
  CHECK_THROWS_AS(fflab::nu_count(P(f3, "0,0,1"), tuple(f3, {"0", "1"})), std::invalid_argument);
  CHECK_THROWS_AS(fflab::nu_count_bruteforce(P(f3, "0,0,1"), tuple(f3, {"0", "1"})), std::invalid_argument);
}

TEST_CASE("nu_count equals the root count for every |P| <= 125") {
  struct Case {
    std::uint32_t p, nu;
    unsigned max_deg;
  };
  for (const Case& c : {Case{2, 1, 6}, Case{3, 1, 4}, Case{2, 2, 3}, Case{5, 1, 3}, Case{7, 1, 2}, Case{3, 2, 2},
                        Case{11, 1, 2}}) {
    const Field f = Field::make(c.p, c.nu);
    const auto table = fflab::sieve_irreducibles(f, c.max_deg);
    std::vector<TupleOffsets> tuples{tuple(f, {"0", "1"}), tuple(f, {"0", "0,1"}), tuple(f, {"0", "1", "0,1"}),
                                     tuple(f, {"1", "0,0,1", "1,1", "0,1,1"})};
    if (f.p() > 2) tuples.push_back(tuple(f, {"0", "1", "2"}));
    for (unsigned d = 1; d <= c.max_deg; ++d) {
      for (const Poly& p : table.polys(d)) {
        for (const auto& t : tuples) {
          const auto nu = fflab::nu_count(p, t);
          CHECK(nu == fflab::nu_count_bruteforce(p, t));
          CHECK(nu >= 1);
          CHECK(nu <= t.size());
        }
      }
    }
  }
}

TEST_CASE("singular_series examples") {
  const Field f2 = Field::make(2);
  const auto zero = fflab::singular_series(tuple(f2, {"0", "1"}), 3);
  CHECK(zero.vanishes);
  CHECK(zero.value == 0);

  const Field f5 = Field::make(5);
  for (unsigned d : {1U, 3U, 6U}) {
    const auto one = fflab::singular_series(tuple(f5, {"2,1"}), d);
    CHECK_FALSE(one.vanishes);
    CHECK(abs(one.value - 1) < Decimal("1e-40"));
  }

  const Field f9 = Field::make(3, 2);
  for (unsigned d : {4U, 6U}) {
    const auto v = fflab::singular_series(tuple(f9, {"0", "1"}), d);
    CHECK(as_double(v.value) >= 0.8);
    CHECK(as_double(v.value) <= 1.2);
  }
  CHECK_THROWS_AS(fflab::singular_series(tuple(f9, {"0", "1"}), 0), std::invalid_argument);
}

TEST_CASE("grouped product equals the literal product over the sieve") {
  for (const Field& f : {Field::make(3), Field::make(2, 2), Field::make(5)}) {
    const unsigned D = f.q() == 5 ? 4 : 5;
    const auto table = fflab::sieve_irreducibles(f, D);
    for (const auto& t : {tuple(f, {"0", "1"}), tuple(f, {"0", "0,1", "1,1"}), tuple(f, {"0", "1,0,1"}),
                          tuple(f, {"0", "1", "0,1", "1,0,1"})}) {
      const auto grouped = fflab::singular_series(t, D);
      const auto literal = fflab::singular_series_enumerated(t, table);
      CHECK(grouped.vanishes == literal.vanishes);
      CHECK(abs(grouped.value - literal.value) <= Decimal("1e-40"));
      CHECK(abs(grouped.tail_bound - literal.tail_bound) <= Decimal("1e-40"));
    }
  }
}

TEST_CASE("truncation convergence and a shrinking tail bound") {
  for (const Field& f : {Field::make(3), Field::make(5), Field::make(7), Field::make(2, 2)}) {
    for (const auto& t : {tuple(f, {"0", "1"}), tuple(f, {"0", "0,1", "1,0,1"}), tuple(f, {"0", "1", "1,0,1", "0,1,1"})}) {
      for (unsigned d = 2; d <= 8; ++d) {
        const auto lo = fflab::singular_series(t, d);
        const auto hi = fflab::singular_series(t, d + 1);
        if (lo.tail_bound < 0) continue;
        CHECK(abs(hi.value - lo.value) <= lo.tail_bound);
        CHECK(hi.tail_bound <= lo.tail_bound);
      }
    }
  }
}

TEST_CASE("singular_twin examples") {
  const Field f2 = Field::make(2);
  const auto zero = fflab::singular_twin(P(f2, "1"), 4);
  CHECK(zero.vanishes);
  CHECK(zero.value == 0);
  // K = t(t+1) over F_2, D = 1: both degree-1 primes divide K.
  CHECK(abs(fflab::singular_twin(P(f2, "0,1,1"), 1).value - 4) < Decimal("1e-40"));
  CHECK_THROWS_AS(fflab::singular_twin(Poly(f2), 3), std::invalid_argument);
}

TEST_CASE("singular_twin agrees with the general product") {
  for (const Field& f : {Field::make(7), Field::make(3), Field::make(5), Field::make(3, 2)}) {
    for (const char* k : {"1", "0,1", "1,0,1", "0,2,1"}) {
      const unsigned D = 5;
      const auto twin = fflab::singular_twin(P(f, k), D);
      const auto general = fflab::singular_series(TupleOffsets({Poly(f), P(f, k)}), D);
      CAPTURE(f.q());
      CAPTURE(k);
      CHECK(abs(twin.value - general.value) <= Decimal("1e-40"));
      // Both bound the same limit.
      CHECK(twin.tail_bound >= 0);
      CHECK(general.tail_bound >= 0);
    }
  }
}

TEST_CASE("c(1) approaches 1 like 1/q") {
  for (std::uint32_t q : {3U, 5U, 7U, 11U}) {
    const Field f = Field::make(q);
    const auto v5 = fflab::singular_twin(P(f, "1"), 5);
    CHECK(std::abs(as_double(v5.value) - 1.0) <= 3.0 / q);
    const unsigned D = fflab::default_twin_truncation(P(f, "1"));
    const auto v = fflab::singular_twin(P(f, "1"), D);
    CHECK(v.tail_bound < Decimal("1e-12"));
    CHECK(std::abs(as_double(v.value) - 1.0) <= 3.0 / q);
  }
}

TEST_CASE("default truncation meets the tolerance") {
  const Field f5 = Field::make(5);
  const auto t = tuple(f5, {"0", "1", "0,1"});
  const unsigned D = fflab::default_truncation(t);
  CHECK(fflab::singular_series(t, D).tail_bound < Decimal("1e-12"));
  CHECK(fflab::singular_series(t, D - 1).tail_bound >= Decimal("1e-12"));
}

TEST_CASE("jsum examples") {
  const Field f5 = Field::make(5);
  const Poly t = P(f5, "0,1");
  const auto j0 = fflab::jsum_check(t, 0, 6);
  CHECK(abs(j0.lhs - fflab::singular_twin(t, 6).value) < Decimal("1e-40"));

  const auto j1 = fflab::jsum_check(t, 1, 4);
  CHECK(abs(j1.rhs - Decimal("6.5")) < Decimal("1e-40"));
  CHECK(as_double(j1.relative_difference) <= 0.3);

  CHECK_THROWS_AS(fflab::jsum_check(P(f5, "3"), 1), std::invalid_argument);
}
