#pragma once

// Finite fields F_q, q = p^nu, in the quotient representation F_p[x]/(m(x)).
//
// Elements are carried as a canonical integer code in [0, q): for nu = 1 the
// residue itself, for nu > 1 the base-p number whose digits are the F_p
// coefficients of the representative, constant term least significant.

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace fflab {

using Elem = std::uint32_t;

/// Largest supported field cardinality.
inline constexpr std::uint32_t kMaxFieldOrder = 1U << 16;

namespace detail {
struct FieldData;
}

class FieldElem;

class Field {
 public:
  /// Builds F_{p^nu}. For nu > 1 the modulus is the lexicographically first
  /// monic irreducible of degree nu, comparing coefficients from the constant
  /// term upward. Throws std::invalid_argument for a non-prime p, nu == 0, or
  /// p^nu > kMaxFieldOrder.
  static Field make(std::uint32_t p, std::uint32_t nu = 1);

  std::uint32_t p() const;
  std::uint32_t nu() const;
  std::uint32_t q() const;
  /// F_p coefficients of the defining modulus, constant term first, length
  /// nu + 1. Empty for prime fields.
  std::span<const std::uint32_t> modulus() const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  /// Throws std::domain_error on zero.
  Elem inv(Elem a) const;
  Elem pow(Elem a, std::uint64_t e) const;

  /// F_p components of an element, constant term first (length nu).
  std::vector<std::uint32_t> components(Elem a) const;
  Elem from_components(std::span<const std::uint32_t> digits) const;

  FieldElem elem(Elem code) const;
  FieldElem zero() const;
  FieldElem one() const;

  /// Fields compare equal iff they have the same (p, nu); the modulus is a
  /// deterministic function of those.
  friend bool operator==(const Field& a, const Field& b);

 private:
  explicit Field(std::shared_ptr<const detail::FieldData> data) : data_(std::move(data)) {}
  std::shared_ptr<const detail::FieldData> data_;
};

/// Field element bound to its field. Mixed-field arithmetic throws
/// std::invalid_argument.
class FieldElem {
 public:
  FieldElem(Field field, Elem code);

  const Field& field() const { return field_; }
  Elem code() const { return code_; }
  bool is_zero() const { return code_ == 0; }

  FieldElem inv() const;
  FieldElem pow(std::uint64_t e) const;

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a);
  friend bool operator==(const FieldElem& a, const FieldElem& b);

 private:
  Field field_;
  Elem code_;
};

bool is_prime(std::uint64_t n);

/// Euler's totient of an ordinary integer.
std::uint64_t integer_totient(std::uint64_t n);

}  // namespace fflab
