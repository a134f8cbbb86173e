#pragma once

// Brute-force reference computations for the tests. Everything here uses
// only ring arithmetic and exhaustive enumeration, never the sieve, Rabin's
// test, the Lambda table or the class enumerators under test.

#include "fflab/poly.hpp"

#include <cstdint>
#include <vector>

namespace oracle {

using fflab::Field;
using fflab::Poly;

inline std::vector<Poly> monics(const Field& field, std::size_t n) {
  std::vector<Poly> out;
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= field.q();
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<fflab::Elem> c(n + 1);
    std::uint64_t v = code;
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = static_cast<fflab::Elem>(v % field.q());
      v /= field.q();
    }
    c[n] = 1;
    out.emplace_back(field, std::move(c));
  }
  return out;
}

/// All polynomials (including 0) of degree < width.
inline std::vector<Poly> residues(const Field& field, std::size_t width) {
  std::vector<Poly> out{Poly(field)};
  for (std::size_t d = 0; d < width; ++d) {
    for (const Poly& m : monics(field, d)) {
      for (fflab::Elem c = 1; c < field.q(); ++c) out.push_back(m.scaled(c));
    }
  }
  return out;
}

/// No monic divisor of degree 1..deg/2.
inline bool irreducible(const Poly& f) {
  const Poly g = f.monic();
  for (std::size_t d = 1; 2 * d <= g.deg(); ++d) {
    for (const Poly& p : monics(g.field(), d)) {
      if ((g % p).is_zero()) return false;
    }
  }
  return g.deg() >= 1;
}

/// Lambda by searching every monic irreducible P with P^k = monic(f).
inline unsigned lambda(const Poly& f) {
  if (f.is_constant()) return 0;
  const Poly g = f.monic();
  const std::size_t n = g.deg();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    for (const Poly& p : monics(g.field(), d)) {
      Poly power = p;
      for (std::size_t k = 1; k < n / d; ++k) power = power * p;
      if (power == g) return irreducible(p) ? static_cast<unsigned>(d) : 0U;
    }
  }
  return 0;
}

inline bool coprime(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = y;
    y = r;
  }
  return x.degree() == std::size_t{0};
}

}  // namespace oracle
