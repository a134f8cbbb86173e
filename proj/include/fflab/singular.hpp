#pragma once

// Hardy-Littlewood singular series over F_q[t]:
//
//   C(h_1..h_r) = prod_P (1 - 1/|P|)^(-r) (1 - nu_P/|P|),
//   nu_P = #{A mod P : (A + h_1)...(A + h_r) = 0 mod P},
//
// truncated to deg P <= D with an explicit bound on the omitted tail.

#include "fflab/exact.hpp"
#include "fflab/prime.hpp"

#include <cstdint>
#include <vector>

namespace fflab {

/// Pairwise distinct offsets h_1..h_r, r >= 1.
class TupleOffsets {
 public:
  /// Throws std::invalid_argument if empty, mixed-field or not distinct.
  explicit TupleOffsets(std::vector<Poly> offsets);

  const Field& field() const { return offsets_.front().field(); }
  std::size_t size() const { return offsets_.size(); }
  const std::vector<Poly>& offsets() const { return offsets_; }

 private:
  std::vector<Poly> offsets_;
};

/// Number of distinct residues among -h_i mod P. Throws std::invalid_argument
/// when P is not irreducible.
std::uint64_t nu_count(const Poly& prime, const TupleOffsets& offsets);
/// Same count by testing every residue A mod P.
std::uint64_t nu_count_bruteforce(const Poly& prime, const TupleOffsets& offsets);

struct SingularValue {
  unsigned truncation = 0;
  Decimal value;
  /// Bound on |C - value| from the local factors with deg P > truncation.
  Decimal tail_bound;
  /// Some included local factor is exactly zero (nu_P = |P|).
  bool vanishes = false;
};

/// Truncated product over monic irreducibles of degree <= D. Local factors
/// are grouped by degree: primes dividing no difference h_i - h_j all have
/// nu = r, and their number comes from count_irreducibles; the remaining
/// primes are found by factoring the differences.
SingularValue singular_series(const TupleOffsets& offsets, unsigned truncation);

/// The same product taken literally over every irreducible in the table
/// (truncation = table.max_degree()), computing nu_P for each one.
SingularValue singular_series_enumerated(const TupleOffsets& offsets, const IrreducibleTable& table);

/// C(0, K) from the closed twin factors: (1-1/|P|)^(-1) for P | K and
/// (1-1/|P|)^(-2)(1-2/|P|) otherwise. Throws std::invalid_argument for K = 0.
SingularValue singular_twin(const Poly& offset, unsigned truncation);

/// Smallest truncation whose tail bound is below `tolerance`.
unsigned default_truncation(const TupleOffsets& offsets, double tolerance = 1e-12);
unsigned default_twin_truncation(const Poly& offset, double tolerance = 1e-12);

/// Upper bound on sum_{d > D} pi_q(d) |log local factor| for the generic
/// primes of an r-tuple; infinite (returned as -1) if the bound does not apply.
Decimal generic_log_tail(std::uint64_t q, std::size_t r, unsigned truncation);

struct JsumComparison {
  unsigned j = 0;
  unsigned truncation = 0;
  Decimal lhs;  ///< sum over monic J of degree j of C(0, J*Q)
  Decimal rhs;  ///< q^j |Q| / Phi(Q) - 1/(1 - q)
  Decimal relative_difference;
};

/// Compares the monic J-sum of twin constants against its predicted size.
/// A truncation of 0 picks default_twin_truncation per term.
JsumComparison jsum_check(const Poly& modulus, unsigned j, unsigned truncation = 0);

}  // namespace fflab
