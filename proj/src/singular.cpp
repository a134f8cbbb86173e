#include "fflab/singular.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace fflab {

namespace {

constexpr unsigned kMaxTruncation = 256;

Decimal pow_u64(Decimal base, std::uint64_t e) {
  Decimal result = 1;
  while (e != 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e != 0) base *= base;
  }
  return result;
}

Decimal norm_of(std::uint64_t q, std::size_t d) { return Decimal(pow_big(q, d)); }

std::uint64_t irreducible_count_u64(std::uint64_t q, unsigned d) {
  const BigInt c = count_irreducibles(q, d);
  if (c > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("irreducible count exceeds 64 bits");
  return c.convert_to<std::uint64_t>();
}

// (1 - 1/N)^(-r) (1 - nu/N) for a prime of norm N.
Decimal local_factor(const Decimal& norm, std::size_t r, std::uint64_t nu) {
  const Decimal x = Decimal(1) / norm;
  return pow_u64(Decimal(1) / (Decimal(1) - x), r) * (Decimal(1) - Decimal(nu) * x);
}

struct SpecialPrime {
  Poly prime;
  std::uint64_t nu;
};

// Irreducibles dividing some h_i - h_j, with their root counts.
std::vector<SpecialPrime> special_primes(const TupleOffsets& offsets) {
  std::vector<Poly> primes;
  const auto& h = offsets.offsets();
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = i + 1; j < h.size(); ++j) {
      for (auto& pf : factor(h[j] - h[i])) {
        if (std::find(primes.begin(), primes.end(), pf.prime) == primes.end()) primes.push_back(pf.prime);
      }
    }
  }
  std::sort(primes.begin(), primes.end(), enumeration_less);
  std::vector<SpecialPrime> out;
  for (auto& p : primes) {
    const std::uint64_t nu = nu_count(p, offsets);
    out.push_back({std::move(p), nu});
  }
  return out;
}

Decimal finish_tail(const Decimal& value, const Decimal& log_tail) {
  if (log_tail < 0) return Decimal(-1);
  const Decimal mag = value < 0 ? Decimal(-value) : value;
  return mag * (boost::multiprecision::exp(log_tail) - Decimal(1));
}

// Log-tail contribution of special primes beyond the truncation. A zero
// factor there means the full product is 0, so the whole value is error.
Decimal special_tail(const std::vector<SpecialPrime>& special, std::uint64_t q, std::size_t r, unsigned truncation,
                     bool& zero_beyond) {
  Decimal tail = 0;
  for (const auto& sp : special) {
    if (sp.prime.deg() <= truncation) continue;
    const Decimal f = local_factor(norm_of(q, sp.prime.deg()), r, sp.nu);
    if (f == 0) {
      zero_beyond = true;
      continue;
    }
    tail += boost::multiprecision::abs(boost::multiprecision::log(f));
  }
  return tail;
}

}  // namespace

TupleOffsets::TupleOffsets(std::vector<Poly> offsets) : offsets_(std::move(offsets)) {
  if (offsets_.empty()) throw std::invalid_argument("tuple needs at least one offset");
  for (std::size_t i = 0; i < offsets_.size(); ++i) {
    if (!(offsets_[i].field() == offsets_.front().field())) throw std::invalid_argument("offsets over different fields");
    for (std::size_t j = 0; j < i; ++j) {
      if (offsets_[i] == offsets_[j]) throw std::invalid_argument("tuple offsets must be distinct");
    }
  }
}

std::uint64_t nu_count(const Poly& prime, const TupleOffsets& offsets) {
  if (!is_irreducible(prime)) throw std::invalid_argument("nu_count needs an irreducible P");
  const Poly p = prime.monic();
  std::set<std::uint64_t> roots;
  for (const Poly& h : offsets.offsets()) roots.insert(residue_index((-h) % p, p.deg()));
  return roots.size();
}

std::uint64_t nu_count_bruteforce(const Poly& prime, const TupleOffsets& offsets) {
  if (!is_irreducible(prime)) throw std::invalid_argument("nu_count needs an irreducible P");
  const Poly p = prime.monic();
  const std::size_t width = p.deg();
  const std::uint64_t residues = checked_pow(p.field().q(), static_cast<unsigned>(width));
  std::uint64_t count = 0;
  for (std::uint64_t a = 0; a < residues; ++a) {
    const Poly x = residue_from_index(p.field(), width, a);
    Poly prod = Poly::constant(p.field(), 1);
    for (const Poly& h : offsets.offsets()) prod = (prod * (x + h)) % p;
    if (prod.is_zero()) ++count;
  }
  return count;
}

Decimal generic_log_tail(std::uint64_t q, std::size_t r, unsigned truncation) {
  if (r <= 1) return 0;
  const Decimal x0 = Decimal(1) / norm_of(q, truncation + 1);
  const Decimal rx0 = Decimal(r) * x0;
  if (rx0 >= 1) return Decimal(-1);
  // per prime: |log factor| <= (r x)^2 / (2 (1 - r x)); pi_q(d) <= q^d / d.
  const Decimal rr = Decimal(r) * Decimal(r);
  return rr * x0 / (Decimal(2) * Decimal(truncation + 1) * (Decimal(1) - rx0) * (Decimal(1) - Decimal(1) / Decimal(q)));
}

SingularValue singular_series(const TupleOffsets& offsets, unsigned truncation) {
  if (truncation == 0 || truncation > kMaxTruncation) throw std::invalid_argument("truncation degree out of range");
  const std::uint64_t q = offsets.field().q();
  const std::size_t r = offsets.size();
  const auto special = special_primes(offsets);

  SingularValue out;
  out.truncation = truncation;
  out.value = 1;
  for (unsigned d = 1; d <= truncation; ++d) {
    std::uint64_t generic = irreducible_count_u64(q, d);
    const Decimal norm = norm_of(q, d);
    for (const auto& sp : special) {
      if (sp.prime.deg() != d) continue;
      --generic;
      if (BigInt(sp.nu) == pow_big(q, d)) out.vanishes = true;
      out.value *= local_factor(norm, r, sp.nu);
    }
    if (generic == 0) continue;
    if (BigInt(r) > pow_big(q, d)) throw std::logic_error("generic prime with more roots than residues");
    if (BigInt(r) == pow_big(q, d)) out.vanishes = true;
    out.value *= pow_u64(local_factor(norm, r, r), generic);
  }
  if (out.vanishes) {
    out.value = 0;
    out.tail_bound = 0;
    return out;
  }
  bool zero_beyond = false;
  const Decimal generic_tail = generic_log_tail(q, r, truncation);
  const Decimal tail = special_tail(special, q, r, truncation, zero_beyond);
  if (zero_beyond) {
    out.tail_bound = boost::multiprecision::abs(out.value);
  } else {
    out.tail_bound = finish_tail(out.value, generic_tail < 0 ? generic_tail : generic_tail + tail);
  }
  return out;
}

SingularValue singular_series_enumerated(const TupleOffsets& offsets, const IrreducibleTable& table) {
  if (!(table.field() == offsets.field())) throw std::invalid_argument("table over a different field");
  const std::uint64_t q = offsets.field().q();
  const std::size_t r = offsets.size();
  SingularValue out;
  out.truncation = table.max_degree();
  out.value = 1;
  for (unsigned d = 1; d <= table.max_degree(); ++d) {
    const Decimal norm = norm_of(q, d);
    for (const Poly& p : table.polys(d)) {
      const std::uint64_t nu = nu_count(p, offsets);
      if (BigInt(nu) == pow_big(q, d)) out.vanishes = true;
      out.value *= local_factor(norm, r, nu);
    }
  }
  if (out.vanishes) {
    out.value = 0;
    out.tail_bound = 0;
    return out;
  }
  bool zero_beyond = false;
  const Decimal generic_tail = generic_log_tail(q, r, out.truncation);
  const Decimal tail = special_tail(special_primes(offsets), q, r, out.truncation, zero_beyond);
  out.tail_bound = zero_beyond ? boost::multiprecision::abs(out.value)
                               : finish_tail(out.value, generic_tail < 0 ? generic_tail : generic_tail + tail);
  return out;
}

SingularValue singular_twin(const Poly& offset, unsigned truncation) {
  if (offset.is_zero()) throw std::invalid_argument("twin singular series needs K != 0");
  if (truncation == 0 || truncation > kMaxTruncation) throw std::invalid_argument("truncation degree out of range");
  const std::uint64_t q = offset.field().q();
  const auto divisors = factor(offset);

  SingularValue out;
  out.truncation = truncation;
  out.value = 1;
  for (unsigned d = 1; d <= truncation; ++d) {
    std::uint64_t generic = irreducible_count_u64(q, d);
    const Decimal norm = norm_of(q, d);
    const Decimal x = Decimal(1) / norm;
    for (const auto& pf : divisors) {
      if (pf.prime.deg() != d) continue;
      --generic;
      out.value /= Decimal(1) - x;
    }
    if (generic == 0) continue;
    if (pow_big(q, d) == 2) {
      out.vanishes = true;
      continue;
    }
    const Decimal inv = Decimal(1) / (Decimal(1) - x);
    out.value *= pow_u64(inv * inv * (Decimal(1) - 2 * x), generic);
  }
  if (out.vanishes) {
    out.value = 0;
    out.tail_bound = 0;
    return out;
  }
  // Generic primes beyond D: |log factor| <= 3/|P|^2 once |P| >= 3.
  const Decimal x0 = Decimal(1) / norm_of(q, truncation + 1);
  Decimal log_tail = Decimal(3) * x0 / (Decimal(truncation + 1) * (Decimal(1) - Decimal(1) / Decimal(q)));
  for (const auto& pf : divisors) {
    if (pf.prime.deg() <= truncation) continue;
    log_tail -= boost::multiprecision::log(Decimal(1) - Decimal(1) / norm_of(q, pf.prime.deg()));
  }
  out.tail_bound = finish_tail(out.value, log_tail);
  return out;
}

unsigned default_truncation(const TupleOffsets& offsets, double tolerance) {
  for (unsigned d = 1; d <= kMaxTruncation; ++d) {
    const auto v = singular_series(offsets, d);
    if (v.tail_bound >= 0 && v.tail_bound < tolerance) return d;
  }
  throw std::runtime_error("no truncation reaches the requested tail bound");
}

unsigned default_twin_truncation(const Poly& offset, double tolerance) {
  for (unsigned d = 1; d <= kMaxTruncation; ++d) {
    const auto v = singular_twin(offset, d);
    if (v.tail_bound >= 0 && v.tail_bound < tolerance) return d;
  }
  throw std::runtime_error("no truncation reaches the requested tail bound");
}

JsumComparison jsum_check(const Poly& modulus, unsigned j, unsigned truncation) {
  if (modulus.is_zero() || modulus.is_constant()) throw std::invalid_argument("jsum needs deg Q >= 1");
  const Field& field = modulus.field();
  const std::uint64_t q = field.q();
  JsumComparison out;
  out.j = j;
  out.lhs = 0;
  const std::uint64_t count = checked_pow(q, j);
  for (std::uint64_t i = 0; i < count; ++i) {
    const Poly k = monic_from_index(field, j, i) * modulus;
    const unsigned d = truncation != 0 ? truncation : default_twin_truncation(k);
    out.truncation = std::max(out.truncation, d);
    out.lhs += singular_twin(k, d).value;
  }
  const BigInt phi = totient(modulus);
  out.rhs = Decimal(pow_big(q, j + modulus.deg())) / Decimal(phi) + Decimal(1) / Decimal(q - 1);
  out.relative_difference = boost::multiprecision::abs(out.lhs - out.rhs) / boost::multiprecision::abs(out.rhs);
  return out;
}

}  // namespace fflab
