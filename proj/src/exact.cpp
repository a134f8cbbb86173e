#include "fflab/exact.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace fflab {

BigInt pow_big(std::uint64_t base, std::uint64_t exp) {
  BigInt result = 1;
  BigInt b = base;
  while (exp != 0) {
    if (exp & 1U) result *= b;
    exp >>= 1U;
    if (exp != 0) b *= b;
  }
  return result;
}

std::string to_string(const BigInt& n) { return n.str(); }

std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_string(const Decimal& d) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(kReportDigits - 1) << d;
  return os.str();
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  auto parse_int = [&](const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer in rational: '" + text + "'");
    std::size_t start = (s[0] == '-') ? 1 : 0;
    if (start == s.size()) throw std::invalid_argument("bad rational: '" + text + "'");
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad rational: '" + text + "'");
    }
    return BigInt(s);
  };
  if (slash == std::string::npos) return Rational(parse_int(text));
  const BigInt num = parse_int(text.substr(0, slash));
  const BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  return Rational(num, den);
}

Decimal to_decimal(const Rational& r) {
  return Decimal(boost::multiprecision::numerator(r)) /
         Decimal(boost::multiprecision::denominator(r));
}

void checked_add(std::uint64_t& acc, std::uint64_t value) {
  if (__builtin_add_overflow(acc, value, &acc)) {
    throw std::overflow_error("64-bit accumulator overflow");
  }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("64-bit product overflow");
  return out;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < exp; ++i) out = checked_mul(out, base);
  return out;
}

}  // namespace fflab
