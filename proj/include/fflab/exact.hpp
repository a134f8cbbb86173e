#pragma once

// Exact integer / rational types and the high-precision decimal used for
// reported ratios and Euler products.

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace fflab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
/// 50 significant decimal digits.
using Decimal = boost::multiprecision::cpp_dec_float_50;

/// Digits used whenever a Decimal is rendered to text.
inline constexpr int kReportDigits = 30;

BigInt pow_big(std::uint64_t base, std::uint64_t exp);

/// "num/den" in lowest terms, or just "num" when the denominator is 1.
std::string to_string(const Rational& r);
std::string to_string(const BigInt& n);
/// Fixed 30-significant-digit scientific rendering, stable across platforms.
std::string to_string(const Decimal& d);

/// Inverse of to_string(Rational); throws std::invalid_argument on bad text.
Rational parse_rational(const std::string& text);

Decimal to_decimal(const Rational& r);

/// a + b into acc, throwing std::overflow_error if the 64-bit sum wraps.
void checked_add(std::uint64_t& acc, std::uint64_t value);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_pow(std::uint64_t base, unsigned exp);

}  // namespace fflab
