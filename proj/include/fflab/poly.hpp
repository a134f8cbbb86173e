#pragma once

// Dense univariate polynomials over a Field, monic enumeration, and the
// canonical comma-separated text format.

#include "fflab/field.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fflab {

/// Polynomial degree with a distinct value for the zero polynomial that
/// orders below every finite degree and refuses integer conversion.
class Degree {
 public:
  static constexpr Degree minus_infinity() { return Degree(); }
  constexpr explicit Degree(std::size_t d) : value_(d) {}

  constexpr bool is_minus_infinity() const { return !value_.has_value(); }
  /// Throws std::domain_error for the zero polynomial's degree.
  std::size_t value() const;

  friend constexpr bool operator==(const Degree&, const Degree&) = default;
  friend constexpr std::strong_ordering operator<=>(const Degree& a, const Degree& b) {
    if (!a.value_ || !b.value_) return a.value_.has_value() <=> b.value_.has_value();
    return *a.value_ <=> *b.value_;
  }
  friend constexpr bool operator==(const Degree& a, std::size_t b) { return a.value_ && *a.value_ == b; }
  friend constexpr std::strong_ordering operator<=>(const Degree& a, std::size_t b) { return a <=> Degree(b); }

 private:
  constexpr Degree() = default;
  std::optional<std::size_t> value_;
};

class Poly {
 public:
  /// The zero polynomial.
  explicit Poly(Field field);
  /// Coefficients constant term first; trailing zeros are stripped. Throws
  /// std::invalid_argument if a code is not a valid element.
  Poly(Field field, std::vector<Elem> coeffs);

  static Poly constant(Field field, Elem c);
  static Poly monomial(Field field, Elem c, std::size_t k);
  /// The polynomial t.
  static Poly variable(Field field);

  const Field& field() const { return field_; }
  std::span<const Elem> coeffs() const { return coeffs_; }
  /// Coefficient of t^i, zero beyond the degree.
  Elem operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : 0; }

  Degree degree() const;
  /// Degree as an integer; throws std::domain_error on the zero polynomial.
  std::size_t deg() const { return degree().value(); }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == 1; }
  Elem leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }

  /// Divides through by the leading coefficient; the zero polynomial stays zero.
  Poly monic() const;
  Poly scaled(Elem c) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator/(const Poly& a, const Poly& b);
  friend Poly operator%(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b);

 private:
  void normalize();

  Field field_;
  std::vector<Elem> coeffs_;
};

/// a = b * quotient + remainder with deg remainder < deg b. Throws
/// std::domain_error when b is zero.
std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b);

/// Monic generator of (a, b); gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);

/// base^e mod m by square-and-multiply.
Poly powmod(const Poly& base, std::uint64_t e, const Poly& m);

/// Evaluation order used by enumeration and sorted tables: degree first,
/// then the coefficient vector read as a base-q number with the constant term
/// least significant.
bool enumeration_less(const Poly& a, const Poly& b);

// -- canonical text format --------------------------------------------------

/// "c0,c1,...,cd" with base-10 residues; over F_{p^nu}, nu > 1, each
/// coefficient is "a0/a1/.../a{nu-1}". The zero polynomial is "0".
std::string format_poly(const Poly& f);

/// Inverse of format_poly. Over extension fields a bare integer below p is
/// also accepted as a prime-subfield coefficient. Throws std::invalid_argument
/// on malformed text or out-of-range coefficients.
Poly parse_poly(std::string_view text, const Field& field);

// -- dense indexing of monic polynomials -----------------------------------

/// Index of a monic f of degree n in [0, q^n): its lower n coefficients read
/// as base-q digits, constant term least significant.
std::uint64_t monic_index(const Poly& f);
Poly monic_from_index(const Field& field, std::size_t n, std::uint64_t index);

/// Same encoding for arbitrary polynomials of degree < width (residues).
std::uint64_t residue_index(const Poly& f, std::size_t width);
Poly residue_from_index(const Field& field, std::size_t width, std::uint64_t index);

// -- enumeration of M_n and of residue classes inside it --------------------

/// M_n, or the subset {f in M_n : f = A mod Q}, enumerated in a fixed order.
/// A constrained range is realised as f = (A mod Q) + J*Q with J running
/// over the monic polynomials of degree n - deg Q.
class MonicRange {
 public:
  static MonicRange all(Field field, std::size_t n);
  /// Throws std::invalid_argument when Q is constant, or when n < deg Q and
  /// A mod Q is not itself monic of degree n.
  static MonicRange congruent(Field field, std::size_t n, const Poly& modulus, const Poly& residue);
  /// Like congruent, but yields the empty range instead of throwing when
  /// n < deg Q and the class has no member of degree n.
  static MonicRange congruent_or_empty(Field field, std::size_t n, const Poly& modulus, const Poly& residue);

  const Field& field() const { return field_; }
  std::size_t degree() const { return n_; }
  bool constrained() const { return modulus_.has_value(); }
  std::uint64_t size() const { return end_ - begin_; }

  /// i-th element of this range (0 <= i < size()).
  Poly at(std::uint64_t i) const;
  /// monic_index of at(i), without building a Poly.
  std::uint64_t index_at(std::uint64_t i) const;

  /// Splits into at most `blocks` disjoint contiguous sub-ranges, each fixing
  /// a block of high coefficients, covering this range in order.
  std::vector<MonicRange> split(std::size_t blocks) const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::uint64_t i = 0; i < size(); ++i) fn(at(i));
  }

 private:
  MonicRange(Field field, std::size_t n) : field_(std::move(field)), n_(n) {}

  Field field_;
  std::size_t n_;
  std::optional<Poly> modulus_;
  std::optional<Poly> reduced_;
  std::size_t free_degree_ = 0;  // degree of J (or n when unconstrained)
  bool singleton_ = false;       // n < deg Q and the class is {A mod Q}
  std::uint64_t begin_ = 0;
  std::uint64_t end_ = 0;
};

/// Adds a fixed polynomial of degree < n to monic indices of degree n.
/// Precomputes the low-digit table so a shift costs one lookup.
class IndexShifter {
 public:
  IndexShifter(const Poly& offset, std::size_t n);
  std::uint64_t operator()(std::uint64_t index) const {
    return index - index % block_ + table_[index % block_];
  }

 private:
  std::uint64_t block_ = 1;
  std::vector<std::uint64_t> table_;
};

}  // namespace fflab
