#pragma once

// Counting sums and moment statistics over M_n: twin correlations
// sum Lambda(f) Lambda(f+K), their restriction to residue classes mod Q, the
// deviations E from the mean q^n / Phi(Q), and the moments H, G, sum E^2 and
// the single-prime variance of Lambda in progressions.
//
// Every moment is computed twice: straight from its definition over residue
// classes, and from the expansion into first and second moments where the
// second moment is split into the diagonal f = g and the shifted pairs
// g = f + J*Q. The two must agree exactly.

#include "fflab/exact.hpp"
#include "fflab/parallel.hpp"
#include "fflab/prime.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fflab {

/// A statistic's precondition failed. reason() is a short stable code used
/// for skipped report rows.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(std::string reason, const std::string& detail)
      : std::invalid_argument(reason + ": " + detail), reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

namespace reason {
inline constexpr const char* kNonCoprime = "non-coprime residue";
inline constexpr const char* kOffsetDegree = "offset degree not below n";
inline constexpr const char* kZeroOffset = "zero offset";
inline constexpr const char* kDegreeBelowModulus = "n below modulus degree";
inline constexpr const char* kConstantModulus = "constant modulus";
inline constexpr const char* kBadDegree = "n must be positive";
}  // namespace reason

/// Which offsets K a sum over "all K" ranges over.
enum class KRange {
  Monic,       ///< K in M_k for k = 0..n-1
  AllNonzero,  ///< every nonzero K with deg K < n
};

/// Irreducible table and dense Lambda for one (field, n), shared by every
/// statistic at that grid point.
class StatsContext {
 public:
  StatsContext(Field field, unsigned n, Parallelism par = {}, const std::filesystem::path& cache_dir = {});
  StatsContext(IrreducibleTable table, unsigned n, Parallelism par = {});

  const Field& field() const { return table_.field(); }
  unsigned n() const { return n_; }
  std::uint64_t q() const { return table_.field().q(); }
  const IrreducibleTable& table() const { return table_; }
  const LambdaTable& lambda() const { return lambda_; }
  Parallelism parallelism() const { return par_; }

  /// Phi(Q), factoring with this context's table (extended if needed).
  BigInt totient(const Poly& modulus) const;

 private:
  IrreducibleTable table_;
  unsigned n_;
  Parallelism par_;
  LambdaTable lambda_;
};

/// The (n, K, Q, A) arguments of psi(n;Q,A,K).
struct TwinParams {
  unsigned n = 0;
  Poly offset;
  std::optional<Poly> modulus;
  std::optional<Poly> residue;

  /// Throws PreconditionError. A is reduced mod Q on success.
  void validate();
};

// -- plain sums ---------------------------------------------------------------

/// sum_{f in M_n} Lambda(f); equals q^n.
BigInt prime_poly_sum(const StatsContext& ctx);
/// Same sum evaluating von_mangoldt per polynomial, independent of the sieve.
BigInt prime_poly_sum_direct(const Field& field, unsigned n, Parallelism par = {});

/// sum_{f in M_n} Lambda(f)^2.
BigInt lambda_sq_sum(const StatsContext& ctx);
/// sum_{d|n} d^2 pi_q(d).
BigInt lambda_sq_closed_form(std::uint64_t q, unsigned n);

/// psi_f(n;K) = sum_{f in M_n} Lambda(f) Lambda(f+K), 0 <= deg K < n, K != 0.
BigInt twin_sum(const StatsContext& ctx, const Poly& offset);
/// Same value walking only the prime powers P^k of degree n from the sieve
/// and evaluating Lambda(f+K) with von_mangoldt.
BigInt twin_sum_sieved(const StatsContext& ctx, const Poly& offset);

/// sum Lambda(f)^2 Lambda(f+K)^2, optionally only over f coprime to Q.
BigInt twin_diag_sum(const StatsContext& ctx, const Poly& offset, const std::optional<Poly>& coprime_to = {});

/// psi(n;Q,A,K) over the class f = A mod Q. Rejects gcd(A,Q) != 1.
BigInt psi_ap(const StatsContext& ctx, TwinParams params);
BigInt psi_ap(const StatsContext& ctx, const Poly& modulus, const Poly& residue, const Poly& offset);
/// The class sum without the coprimality requirement on A.
BigInt psi_class(const StatsContext& ctx, const Poly& modulus, const Poly& residue, const Poly& offset);
/// psi_1(n;Q,A) = sum_{f in M_n, f = A mod Q} Lambda(f); n < deg Q allowed.
BigInt psi_prime_class(const StatsContext& ctx, const Poly& modulus, const Poly& residue);

/// E(n;Q,A,K) = |psi(n;Q,A,K) - q^n/Phi(Q)|.
Rational e_term(const StatsContext& ctx, TwinParams params);

// -- moments -------------------------------------------------------------------

struct GridPoint {
  std::uint32_t p = 0;
  std::uint32_t nu = 1;
  unsigned n = 0;
  std::optional<Poly> modulus;
  std::optional<Poly> residue;
  std::optional<Poly> offset;
};

struct MomentReport {
  std::string statistic;  ///< "H", "G", "esq" or "kz-prime"
  GridPoint point;
  Rational value;            ///< from the definition over residue classes
  Rational expansion_value;  ///< from the moment expansion
  Rational predicted;
  /// The competing normalisation of the prediction, when there is one.
  std::optional<Rational> alt_predicted;
  std::string alt_label;
  KRange k_range = KRange::Monic;

  bool paths_agree() const { return value == expansion_value; }
  /// value / predicted; empty when the prediction is zero.
  std::optional<Decimal> ratio() const;
};

/// Reduced residues mod Q (deg < deg Q), in residue-index order.
std::vector<Poly> coprime_residues(const Poly& modulus);

/// The K values a sum over all offsets ranges over.
std::vector<Poly> offsets_in_range(const Field& field, unsigned n, KRange range);

/// H(n;Q) = sum_{gcd(A,Q)=1} E(n;Q,A,K)^2; predicted n^2 q^{2n}.
MomentReport ap_variance_twin(const StatsContext& ctx, const Poly& modulus, const Poly& offset);
/// G = sum_{gcd(A,Q)=1} E(n;Q,A,K); predicted n q^n.
MomentReport ap_absdev_twin(const StatsContext& ctx, const Poly& modulus, const Poly& offset);
/// sum over K of E(n;Q,A,K)^2; predicted q^{3n}/Phi(Q)^2 (alt: q^{3n}/phi(q)^2).
MomentReport e_sq_total(const StatsContext& ctx, const Poly& modulus, const Poly& residue,
                        KRange range = KRange::Monic);
/// sum_{gcd(A,Q)=1} |psi_1(n;Q,A) - q^n/Phi(Q)|^2; predicted n q^n - q^{2n}/Phi(Q)
/// (alt: q^n (deg Q - 1)).
MomentReport prime_ap_variance(const StatsContext& ctx, const Poly& modulus);

}  // namespace fflab
