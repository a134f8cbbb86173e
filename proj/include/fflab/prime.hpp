#pragma once

// Irreducibility, the von Mangoldt function, the irreducible sieve and its
// on-disk cache, irreducible counts, factorisation by table, and Phi(Q).

#include "fflab/exact.hpp"
#include "fflab/parallel.hpp"
#include "fflab/poly.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace fflab {

/// Rabin's test. Non-monic input is normalised first. Throws
/// std::invalid_argument for constant or zero f.
bool is_irreducible(const Poly& f);

/// Lambda(f): deg P if monic(f) = P^k with P monic irreducible, else 0.
/// Constants give 0; the zero polynomial throws std::invalid_argument.
/// Locates the candidate P as gcd(t^(q^d) - t, f) for the least d with a
/// nontrivial gcd.
unsigned von_mangoldt(const Poly& f);

/// Same contract as von_mangoldt, by trial division with monic divisors of
/// increasing degree. Slow; used as the reference.
unsigned von_mangoldt_reference(const Poly& f);

int mobius(std::uint64_t n);

/// Number of monic irreducibles of degree n over F_q, (1/n) sum_{d|n} mu(d) q^(n/d).
BigInt count_irreducibles(std::uint64_t q, unsigned n);

/// Largest q^D the sieve will allocate.
inline constexpr std::uint64_t kSieveBudget = std::uint64_t{1} << 28;

/// All monic irreducibles of degree 1..max_degree, per degree in enumeration
/// order. Stored as monic indices.
class IrreducibleTable {
 public:
  IrreducibleTable(Field field, unsigned max_degree, std::vector<std::vector<std::uint64_t>> by_degree);

  const Field& field() const { return field_; }
  unsigned max_degree() const { return max_degree_; }
  std::size_t count(unsigned d) const;
  std::span<const std::uint64_t> indices(unsigned d) const;
  Poly at(unsigned d, std::size_t i) const;
  std::vector<Poly> polys(unsigned d) const;
  bool contains(const Poly& f) const;

  /// Cache format: header "# field p=<p> nu=<nu> D=<D>", then for each degree
  /// a line "# degree <d> count <c>" followed by one polynomial per line in
  /// canonical text.
  void save(std::ostream& os) const;
  static IrreducibleTable load(std::istream& is, const Field& field);

  friend bool operator==(const IrreducibleTable&, const IrreducibleTable&) = default;

 private:
  Field field_;
  unsigned max_degree_;
  std::vector<std::vector<std::uint64_t>> by_degree_;  // index 0 unused
};

/// Sieve of Eratosthenes over M_d: marks every product P*h with deg P <= d/2.
/// Throws std::invalid_argument for max_degree == 0 and std::length_error
/// when q^max_degree exceeds kSieveBudget.
IrreducibleTable sieve_irreducibles(const Field& field, unsigned max_degree, Parallelism par = {});

/// Loads <cache_dir>/sieve_p<p>_nu<nu>_D<D>.txt if present, otherwise sieves
/// and writes it. An empty cache_dir disables caching.
IrreducibleTable cached_sieve(const Field& field, unsigned max_degree, const std::filesystem::path& cache_dir,
                              Parallelism par = {});

/// Cache directory from FFLAB_CACHE_DIR, defaulting to ".cache".
std::filesystem::path default_cache_dir();

struct PrimeFactor {
  Poly prime;
  unsigned multiplicity;
};

/// Monic irreducible factorisation of monic(f) by repeated extraction of
/// table divisors. The table must reach degree deg(f)/2. Factors come out in
/// enumeration order.
std::vector<PrimeFactor> factor_with_table(const Poly& f, const IrreducibleTable& table);
/// Builds the needed table itself.
std::vector<PrimeFactor> factor(const Poly& f);

/// Number of reduced residues modulo Q. Throws std::invalid_argument for a
/// constant Q.
BigInt totient(const Poly& modulus);
BigInt totient(const Poly& modulus, const IrreducibleTable& table);

/// Dense Lambda over M_n, indexed by monic_index.
class LambdaTable {
 public:
  /// Requires table.max_degree() >= n.
  LambdaTable(const IrreducibleTable& table, unsigned n);

  const Field& field() const { return field_; }
  unsigned degree() const { return n_; }
  std::uint64_t size() const { return values_.size(); }
  std::uint8_t operator[](std::uint64_t index) const { return values_[index]; }
  std::span<const std::uint8_t> values() const { return values_; }

 private:
  Field field_;
  unsigned n_;
  std::vector<std::uint8_t> values_;
};

}  // namespace fflab
