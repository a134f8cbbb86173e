#include "fflab/twin_stats.hpp"

#include <algorithm>
#include <utility>

namespace fflab {

namespace {

// Sum of term(i) over [0, count) in fixed blocks, merged in block order with
// overflow-checked 64-bit arithmetic.
template <class Term>
std::uint64_t block_sum(std::uint64_t count, Parallelism par, Term&& term) {
  if (count == 0) return 0;
  const std::size_t blocks = static_cast<std::size_t>(std::min<std::uint64_t>(count, 16 * par.resolved()));
  const std::uint64_t per = (count + blocks - 1) / blocks;
  const auto partial = parallel_blocks<std::uint64_t>(blocks, par, [&](std::size_t b) {
    std::uint64_t acc = 0;
    const std::uint64_t hi = std::min(count, (b + 1) * per);
    for (std::uint64_t i = b * per; i < hi; ++i) checked_add(acc, term(i));
    return acc;
  });
  std::uint64_t total = 0;
  for (auto v : partial) checked_add(total, v);
  return total;
}

// Adds a polynomial of degree < n, given by its coefficient codes, to a
// monic index of degree n.
class IndexAdder {
 public:
  IndexAdder(const Field& field, unsigned n) : field_(field) {
    pow_.resize(n + 1);
    std::uint64_t v = 1;
    for (unsigned i = 0; i <= n; ++i) {
      pow_[i] = v;
      v *= field.q();
    }
  }

  std::uint64_t operator()(std::uint64_t index, std::span<const Elem> digits) const {
    const std::uint64_t q = field_.q();
    std::uint64_t out = index;
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] == 0) continue;
      const auto d = static_cast<Elem>((index / pow_[i]) % q);
      const Elem s = field_.add(d, digits[i]);
      out = out - d * pow_[i] + s * pow_[i];
    }
    return out;
  }

 private:
  Field field_;
  std::vector<std::uint64_t> pow_;
};

std::vector<Elem> digits_of(const Poly& f) { return {f.coeffs().begin(), f.coeffs().end()}; }

// Residue-class bookkeeping for a modulus Q: f -> index of f mod Q, and
// whether that residue is a unit.
class ResidueMap {
 public:
  explicit ResidueMap(const Poly& modulus)
      : modulus_(modulus), width_(modulus.deg()), coprime_(checked_pow(modulus.field().q(), width_), 0) {
    for (std::uint64_t r = 0; r < coprime_.size(); ++r) {
      const Poly a = residue_from_index(modulus.field(), width_, r);
      coprime_[r] = (!a.is_zero() && gcd(a, modulus_).is_constant()) ? 1 : 0;
    }
  }

  std::uint64_t residue_of(const Poly& f) const { return residue_index(f % modulus_, width_); }
  std::uint64_t residue_of_monic(const Field& field, unsigned n, std::uint64_t index) const {
    return residue_of(monic_from_index(field, n, index));
  }
  bool unit(std::uint64_t residue) const { return coprime_[residue] != 0; }
  std::uint64_t classes() const { return coprime_.size(); }

 private:
  Poly modulus_;
  std::size_t width_;
  std::vector<std::uint8_t> coprime_;
};

void check_degree(unsigned n) {
  if (n == 0) throw PreconditionError(reason::kBadDegree, "n = 0");
}

void check_offset(const Poly& offset, unsigned n) {
  if (offset.is_zero()) throw PreconditionError(reason::kZeroOffset, "K = 0");
  if (offset.deg() >= n) throw PreconditionError(reason::kOffsetDegree, "deg K = " + std::to_string(offset.deg()));
}

void check_modulus(const Poly& modulus, unsigned n, bool allow_below) {
  if (modulus.is_zero() || modulus.is_constant()) throw PreconditionError(reason::kConstantModulus, format_poly(modulus));
  if (!allow_below && n < modulus.deg()) {
    throw PreconditionError(reason::kDegreeBelowModulus, "n = " + std::to_string(n) + " < deg Q");
  }
}

void check_coprime(const Poly& modulus, const Poly& residue) {
  const Poly a = residue % modulus;
  if (a.is_zero() || !gcd(a, modulus).is_constant()) {
    throw PreconditionError(reason::kNonCoprime, "gcd(" + format_poly(residue) + ", " + format_poly(modulus) + ") != 1");
  }
}

// q^n / Phi(Q)
Rational mean_of(const StatsContext& ctx, const BigInt& phi) {
  return Rational(pow_big(ctx.q(), ctx.n()), phi);
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

GridPoint point_of(const StatsContext& ctx) {
  GridPoint g;
  g.p = ctx.field().p();
  g.nu = ctx.field().nu();
  g.n = ctx.n();
  return g;
}

// Class member indices of f = A mod Q inside M_n, in enumeration order.
std::vector<std::uint64_t> class_indices(const StatsContext& ctx, const Poly& modulus, const Poly& residue) {
  const MonicRange range = MonicRange::congruent_or_empty(ctx.field(), ctx.n(), modulus, residue);
  std::vector<std::uint64_t> out(range.size());
  for (std::uint64_t i = 0; i < range.size(); ++i) out[i] = range.index_at(i);
  return out;
}

// Nonzero J with deg J < m, as the coefficient codes of J*Q.
std::vector<std::vector<Elem>> shifted_multiples(const Poly& modulus, unsigned n) {
  std::vector<std::vector<Elem>> out;
  const std::size_t dq = modulus.deg();
  if (n <= dq) return out;
  const std::size_t m = n - dq;
  const std::uint64_t count = checked_pow(modulus.field().q(), static_cast<unsigned>(m));
  for (std::uint64_t j = 1; j < count; ++j) out.push_back(digits_of(residue_from_index(modulus.field(), m, j) * modulus));
  return out;
}

}  // namespace

// -- StatsContext ------------------------------------------------------------------

StatsContext::StatsContext(Field field, unsigned n, Parallelism par, const std::filesystem::path& cache_dir)
    : StatsContext(cached_sieve(field, std::max(1U, n), cache_dir, par), n, par) {}

StatsContext::StatsContext(IrreducibleTable table, unsigned n, Parallelism par)
    : table_(std::move(table)), n_(n), par_(par), lambda_((check_degree(n), table_), n) {}

BigInt StatsContext::totient(const Poly& modulus) const {
  if (modulus.is_zero() || modulus.is_constant()) throw PreconditionError(reason::kConstantModulus, format_poly(modulus));
  if (modulus.deg() / 2 <= table_.max_degree()) return fflab::totient(modulus, table_);
  return fflab::totient(modulus);
}

void TwinParams::validate() {
  check_degree(n);
  check_offset(offset, n);
  if (modulus.has_value() != residue.has_value()) {
    throw std::invalid_argument("modulus and residue must be given together");
  }
  if (modulus) {
    check_modulus(*modulus, n, false);
    check_coprime(*modulus, *residue);
    residue = *residue % *modulus;
  }
}

// -- plain sums ----------------------------------------------------------------------

BigInt prime_poly_sum(const StatsContext& ctx) {
  const auto& lam = ctx.lambda();
  return block_sum(lam.size(), ctx.parallelism(), [&](std::uint64_t i) { return std::uint64_t{lam[i]}; });
}

BigInt prime_poly_sum_direct(const Field& field, unsigned n, Parallelism par) {
  check_degree(n);
  const MonicRange range = MonicRange::all(field, n);
  return block_sum(range.size(), par, [&](std::uint64_t i) { return std::uint64_t{von_mangoldt(range.at(i))}; });
}

BigInt lambda_sq_sum(const StatsContext& ctx) {
  const auto& lam = ctx.lambda();
  return block_sum(lam.size(), ctx.parallelism(), [&](std::uint64_t i) {
    const std::uint64_t v = lam[i];
    return v * v;
  });
}

BigInt lambda_sq_closed_form(std::uint64_t q, unsigned n) {
  check_degree(n);
  BigInt total = 0;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d == 0) total += BigInt(d) * d * count_irreducibles(q, d);
  }
  return total;
}

BigInt twin_sum(const StatsContext& ctx, const Poly& offset) {
  check_offset(offset, ctx.n());
  const auto& lam = ctx.lambda();
  const IndexShifter shift(offset, ctx.n());
  return block_sum(lam.size(), ctx.parallelism(), [&](std::uint64_t i) {
    const std::uint64_t a = lam[i];
    return a == 0 ? 0 : a * lam[shift(i)];
  });
}

BigInt twin_sum_sieved(const StatsContext& ctx, const Poly& offset) {
  check_offset(offset, ctx.n());
  const unsigned n = ctx.n();
  std::uint64_t total = 0;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    for (const Poly& p : ctx.table().polys(d)) {
      Poly f = p;
      for (unsigned k = 1; k < n / d; ++k) f = f * p;
      checked_add(total, std::uint64_t{d} * von_mangoldt(f + offset));
    }
  }
  return total;
}

BigInt twin_diag_sum(const StatsContext& ctx, const Poly& offset, const std::optional<Poly>& coprime_to) {
  check_offset(offset, ctx.n());
  const auto& lam = ctx.lambda();
  const IndexShifter shift(offset, ctx.n());
  std::optional<ResidueMap> residues;
  if (coprime_to) {
    check_modulus(*coprime_to, ctx.n(), true);
    residues.emplace(*coprime_to);
  }
  return block_sum(lam.size(), ctx.parallelism(), [&](std::uint64_t i) -> std::uint64_t {
    const std::uint64_t a = lam[i];
    if (a == 0) return 0;
    const std::uint64_t b = lam[shift(i)];
    if (b == 0) return 0;
    if (residues && !residues->unit(residues->residue_of_monic(ctx.field(), ctx.n(), i))) return 0;
    return a * a * b * b;
  });
}

BigInt psi_class(const StatsContext& ctx, const Poly& modulus, const Poly& residue, const Poly& offset) {
  check_offset(offset, ctx.n());
  check_modulus(modulus, ctx.n(), false);
  const auto& lam = ctx.lambda();
  const IndexShifter shift(offset, ctx.n());
  const MonicRange range = MonicRange::congruent(ctx.field(), ctx.n(), modulus, residue);
  return block_sum(range.size(), ctx.parallelism(), [&](std::uint64_t i) {
    const std::uint64_t idx = range.index_at(i);
    const std::uint64_t a = lam[idx];
    return a == 0 ? 0 : a * lam[shift(idx)];
  });
}

BigInt psi_ap(const StatsContext& ctx, TwinParams params) {
  if (!params.modulus) throw std::invalid_argument("psi_ap needs a modulus and residue");
  params.validate();
  return psi_class(ctx, *params.modulus, *params.residue, params.offset);
}

BigInt psi_ap(const StatsContext& ctx, const Poly& modulus, const Poly& residue, const Poly& offset) {
  return psi_ap(ctx, TwinParams{ctx.n(), offset, modulus, residue});
}

BigInt psi_prime_class(const StatsContext& ctx, const Poly& modulus, const Poly& residue) {
  check_modulus(modulus, ctx.n(), true);
  const auto& lam = ctx.lambda();
  const MonicRange range = MonicRange::congruent_or_empty(ctx.field(), ctx.n(), modulus, residue);
  return block_sum(range.size(), ctx.parallelism(), [&](std::uint64_t i) { return std::uint64_t{lam[range.index_at(i)]}; });
}

Rational e_term(const StatsContext& ctx, TwinParams params) {
  if (!params.modulus) throw std::invalid_argument("e_term needs a modulus and residue");
  params.validate();
  const BigInt psi = psi_class(ctx, *params.modulus, *params.residue, params.offset);
  return abs(Rational(psi) - mean_of(ctx, ctx.totient(*params.modulus)));
}

// -- moments -------------------------------------------------------------------------

std::optional<Decimal> MomentReport::ratio() const {
  if (predicted == 0) return std::nullopt;
  return to_decimal(value / predicted);
}

std::vector<Poly> coprime_residues(const Poly& modulus) {
  if (modulus.is_zero() || modulus.is_constant()) throw PreconditionError(reason::kConstantModulus, format_poly(modulus));
  const std::size_t width = modulus.deg();
  const std::uint64_t count = checked_pow(modulus.field().q(), static_cast<unsigned>(width));
  std::vector<Poly> out;
  for (std::uint64_t r = 1; r < count; ++r) {
    Poly a = residue_from_index(modulus.field(), width, r);
    if (gcd(a, modulus).is_constant()) out.push_back(std::move(a));
  }
  return out;
}

std::vector<Poly> offsets_in_range(const Field& field, unsigned n, KRange range) {
  std::vector<Poly> out;
  if (range == KRange::AllNonzero) {
    const std::uint64_t count = checked_pow(field.q(), n);
    for (std::uint64_t r = 1; r < count; ++r) out.push_back(residue_from_index(field, n, r));
    return out;
  }
  for (unsigned k = 0; k < n; ++k) {
    const std::uint64_t count = checked_pow(field.q(), k);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(monic_from_index(field, k, i));
  }
  return out;
}

namespace {

struct TwinMoments {
  std::uint64_t first = 0;          // sum over coprime f of Lambda(f)Lambda(f+K)
  std::uint64_t second_diag = 0;    // sum over coprime f of Lambda(f)^2 Lambda(f+K)^2
  std::uint64_t second_shift = 0;   // sum over coprime f, J != 0 of the four-fold product
};

// First and second moments of psi(n;Q,.,K) over coprime classes, from a scan
// of all of M_n and the shifted pairs g = f + J*Q.
TwinMoments twin_moments(const StatsContext& ctx, const Poly& modulus, const Poly& offset) {
  const auto& lam = ctx.lambda();
  const IndexShifter shift(offset, ctx.n());
  const IndexAdder adder(ctx.field(), ctx.n());
  const ResidueMap residues(modulus);
  const auto multiples = shifted_multiples(modulus, ctx.n());
  const std::uint64_t count = lam.size();
  const std::size_t blocks = static_cast<std::size_t>(std::min<std::uint64_t>(count, 16 * ctx.parallelism().resolved()));
  const std::uint64_t per = (count + blocks - 1) / blocks;
  const auto partial = parallel_blocks<TwinMoments>(blocks, ctx.parallelism(), [&](std::size_t b) {
    TwinMoments m;
    for (std::uint64_t f = b * per; f < std::min(count, (b + 1) * per); ++f) {
      const std::uint64_t w = std::uint64_t{lam[f]} * lam[shift(f)];
      if (w == 0) continue;
      if (!residues.unit(residues.residue_of_monic(ctx.field(), ctx.n(), f))) continue;
      checked_add(m.first, w);
      checked_add(m.second_diag, w * w);
      for (const auto& jq : multiples) {
        const std::uint64_t g = adder(f, jq);
        checked_add(m.second_shift, w * lam[g] * lam[shift(g)]);
      }
    }
    return m;
  });
  TwinMoments total;
  for (const auto& m : partial) {
    checked_add(total.first, m.first);
    checked_add(total.second_diag, m.second_diag);
    checked_add(total.second_shift, m.second_shift);
  }
  return total;
}

// psi(n;Q,A,K) for every residue A, bucketed from one pass over M_n.
std::vector<std::uint64_t> psi_by_residue(const StatsContext& ctx, const Poly& offset, const ResidueMap& residues) {
  const auto& lam = ctx.lambda();
  const IndexShifter shift(offset, ctx.n());
  std::vector<std::uint64_t> psi(residues.classes(), 0);
  for (std::uint64_t f = 0; f < lam.size(); ++f) {
    const std::uint64_t w = std::uint64_t{lam[f]} * lam[shift(f)];
    if (w != 0) checked_add(psi[residues.residue_of_monic(ctx.field(), ctx.n(), f)], w);
  }
  return psi;
}

MomentReport twin_report(const StatsContext& ctx, const char* stat, const Poly& modulus, const Poly& offset) {
  check_offset(offset, ctx.n());
  check_modulus(modulus, ctx.n(), false);
  MomentReport r;
  r.statistic = stat;
  r.point = point_of(ctx);
  r.point.modulus = modulus;
  r.point.offset = offset;
  return r;
}

}  // namespace

MomentReport ap_variance_twin(const StatsContext& ctx, const Poly& modulus, const Poly& offset) {
  MomentReport r = twin_report(ctx, "H", modulus, offset);
  const BigInt phi = ctx.totient(modulus);
  const Rational mean = mean_of(ctx, phi);

  for (const Poly& a : coprime_residues(modulus)) {
    const Rational dev = Rational(psi_class(ctx, modulus, a, offset)) - mean;
    r.value += dev * dev;
  }

  const TwinMoments m = twin_moments(ctx, modulus, offset);
  const Rational second = Rational(BigInt(m.second_diag) + BigInt(m.second_shift));
  const BigInt qn = pow_big(ctx.q(), ctx.n());
  r.expansion_value = second - 2 * mean * Rational(BigInt(m.first)) + Rational(qn * qn, phi);

  r.predicted = Rational(BigInt(ctx.n()) * ctx.n() * qn * qn);
  return r;
}

MomentReport ap_absdev_twin(const StatsContext& ctx, const Poly& modulus, const Poly& offset) {
  MomentReport r = twin_report(ctx, "G", modulus, offset);
  const BigInt phi = ctx.totient(modulus);
  const Rational mean = mean_of(ctx, phi);

  for (const Poly& a : coprime_residues(modulus)) {
    r.value += abs(Rational(psi_class(ctx, modulus, a, offset)) - mean);
  }

  // sum |x - mean| = 2 sum max(x - mean, 0) - (sum x - Phi * mean)
  const ResidueMap residues(modulus);
  const auto psi = psi_by_residue(ctx, offset, residues);
  Rational excess = 0;
  for (std::uint64_t a = 0; a < psi.size(); ++a) {
    if (!residues.unit(a)) continue;
    const Rational dev = Rational(BigInt(psi[a])) - mean;
    if (dev > 0) excess += dev;
  }
  const TwinMoments m = twin_moments(ctx, modulus, offset);
  const BigInt qn = pow_big(ctx.q(), ctx.n());
  r.expansion_value = 2 * excess - (Rational(BigInt(m.first)) - Rational(qn));

  r.predicted = Rational(BigInt(ctx.n()) * qn);
  return r;
}

MomentReport e_sq_total(const StatsContext& ctx, const Poly& modulus, const Poly& residue, KRange range) {
  check_modulus(modulus, ctx.n(), false);
  check_coprime(modulus, residue);
  MomentReport r;
  r.statistic = "esq";
  r.point = point_of(ctx);
  r.point.modulus = modulus;
  r.point.residue = residue % modulus;
  r.k_range = range;

  const BigInt phi = ctx.totient(modulus);
  const Rational mean = mean_of(ctx, phi);
  const auto offsets = offsets_in_range(ctx.field(), ctx.n(), range);

  for (const Poly& k : offsets) {
    const Rational dev = Rational(psi_class(ctx, modulus, residue, k)) - mean;
    r.value += dev * dev;
  }

  // Expansion: sum_K psi^2 - 2 mean sum_K psi + #K mean^2, with
  // psi_K^2 split into f = g and g = f + J*Q inside the class.
  const auto& lam = ctx.lambda();
  const IndexAdder adder(ctx.field(), ctx.n());
  std::vector<std::vector<Elem>> k_digits;
  k_digits.reserve(offsets.size());
  for (const Poly& k : offsets) k_digits.push_back(digits_of(k));
  const auto members = class_indices(ctx, modulus, residue);

  std::uint64_t first = 0;
  std::uint64_t diag = 0;
  std::uint64_t shifted = 0;
  std::vector<std::uint64_t> f_plus_k(k_digits.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::uint64_t f = members[i];
    const std::uint64_t lf = lam[f];
    if (lf == 0) continue;
    std::uint64_t row = 0;
    std::uint64_t row_sq = 0;
    for (std::size_t k = 0; k < k_digits.size(); ++k) {
      f_plus_k[k] = adder(f, k_digits[k]);
      const std::uint64_t v = lam[f_plus_k[k]];
      row += v;
      row_sq += v * v;
    }
    checked_add(first, lf * row);
    checked_add(diag, lf * lf * row_sq);
    for (std::size_t j = 0; j < members.size(); ++j) {
      if (j == i) continue;
      const std::uint64_t g = members[j];
      const std::uint64_t lg = lam[g];
      if (lg == 0) continue;
      std::uint64_t cross = 0;
      for (std::size_t k = 0; k < k_digits.size(); ++k) cross += std::uint64_t{lam[f_plus_k[k]]} * lam[adder(g, k_digits[k])];
      checked_add(shifted, checked_mul(lf * lg, cross));
    }
  }
  const Rational count(BigInt(offsets.size()));
  r.expansion_value =
      Rational(BigInt(diag) + BigInt(shifted)) - 2 * mean * Rational(BigInt(first)) + count * mean * mean;

  const BigInt q3n = pow_big(ctx.q(), 3U * ctx.n());
  r.predicted = Rational(q3n, phi * phi);
  const BigInt phi_q = integer_totient(ctx.q());
  r.alt_predicted = Rational(q3n, phi_q * phi_q);
  r.alt_label = "q^3n/phi(q)^2";
  return r;
}

MomentReport prime_ap_variance(const StatsContext& ctx, const Poly& modulus) {
  check_modulus(modulus, ctx.n(), true);
  MomentReport r;
  r.statistic = "kz-prime";
  r.point = point_of(ctx);
  r.point.modulus = modulus;

  const BigInt phi = ctx.totient(modulus);
  const Rational mean = mean_of(ctx, phi);
  for (const Poly& a : coprime_residues(modulus)) {
    const Rational dev = Rational(psi_prime_class(ctx, modulus, a)) - mean;
    r.value += dev * dev;
  }

  // Expansion over the coprime part of M_n with shifted pairs g = f + J*Q.
  const auto& lam = ctx.lambda();
  const IndexAdder adder(ctx.field(), ctx.n());
  const ResidueMap residues(modulus);
  const auto multiples = shifted_multiples(modulus, ctx.n());
  std::uint64_t first = 0;
  std::uint64_t second = 0;
  for (std::uint64_t f = 0; f < lam.size(); ++f) {
    const std::uint64_t lf = lam[f];
    if (lf == 0) continue;
    if (!residues.unit(residues.residue_of_monic(ctx.field(), ctx.n(), f))) continue;
    checked_add(first, lf);
    checked_add(second, lf * lf);
    for (const auto& jq : multiples) checked_add(second, lf * lam[adder(f, jq)]);
  }
  const BigInt qn = pow_big(ctx.q(), ctx.n());
  r.expansion_value = Rational(BigInt(second)) - 2 * mean * Rational(BigInt(first)) + Rational(qn * qn, phi);

  r.predicted = Rational(BigInt(ctx.n()) * qn) - Rational(qn * qn, phi);
  r.alt_predicted = Rational(qn * (BigInt(modulus.deg()) - 1));
  r.alt_label = "q^n(deg Q-1)";
  return r;
}

}  // namespace fflab
