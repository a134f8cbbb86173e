#include "fflab/lab/runner.hpp"

#include "fflab/singular.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace fflab::lab {

namespace {

struct Point {
  Field field;
  unsigned n = 0;
  std::optional<Poly> modulus;
  std::optional<Poly> residue;
  std::optional<Poly> offset;
};

std::string text_of(const std::optional<Poly>& f) { return f ? format_poly(*f) : std::string(); }

std::string ratio_text(const Rational& value, const Rational& predicted) {
  if (predicted == 0) return "";
  return to_string(to_decimal(value / predicted));
}

std::string ratio_text(const Decimal& value, const Decimal& predicted) {
  if (predicted == 0) return "";
  return to_string(Decimal(value / predicted));
}

unsigned twin_truncation(const Poly& k, const std::optional<unsigned>& override_deg) {
  return override_deg ? *override_deg : default_twin_truncation(k);
}

// q^n / Phi(Q) corrected by the twin constant c(K).
void add_twin_flags(ReportRow& row, const Poly& k, const Rational& base, const std::optional<unsigned>& max_deg) {
  const auto c = singular_twin(k, twin_truncation(k, max_deg));
  if (c.vanishes) row.flags.emplace_back("vanishing");
  row.flags.push_back("c_corrected=" + to_string(Decimal(c.value * to_decimal(base))));
}

void add_moment(ReportRow& row, const MomentReport& m) {
  row.value = to_string(m.value);
  row.predicted = to_string(m.predicted);
  row.ratio = ratio_text(m.value, m.predicted);
  row.flags.emplace_back(m.paths_agree() ? "dual-path=ok" : "dual-path=MISMATCH");
  if (!m.paths_agree()) row.flags.push_back("expansion=" + to_string(m.expansion_value));
  if (m.alt_predicted) row.flags.push_back("alt_predicted[" + m.alt_label + "]=" + to_string(*m.alt_predicted));
  if (m.k_range == KRange::AllNonzero) row.flags.emplace_back("k-range=all");
}

class ContextCache {
 public:
  ContextCache(const RunOptions& options, Parallelism inner) : options_(options), inner_(inner) {}

  // Built up front on the calling thread.
  void prepare(const Field& field, unsigned n) {
    const auto key = std::make_tuple(field.p(), field.nu(), n);
    if (n == 0 || contexts_.count(key)) return;
    auto table = cached_sieve(field, n, options_.cache_dir, options_.par);
    contexts_.emplace(key, std::make_unique<StatsContext>(std::move(table), n, inner_));
  }

  const StatsContext& get(const Field& field, unsigned n) const {
    if (n == 0) throw PreconditionError(reason::kBadDegree, "n = 0");
    return *contexts_.at(std::make_tuple(field.p(), field.nu(), n));
  }

 private:
  const RunOptions& options_;
  Parallelism inner_;
  std::map<std::tuple<std::uint32_t, std::uint32_t, unsigned>, std::unique_ptr<StatsContext>> contexts_;
};

std::vector<Poly> parse_all(const std::vector<std::string>& texts, const Field& field) {
  std::vector<Poly> out;
  for (const auto& t : texts) out.push_back(parse_poly(t, field));
  return out;
}

std::vector<Point> expand(const ExperimentGrid& grid, const std::vector<Field>& fields) {
  const Statistic s = grid.statistic;
  const bool use_modulus = s != Statistic::TwinSum && s != Statistic::Identities;
  const bool use_residue = s == Statistic::Psi || s == Statistic::Esq;
  const bool use_offset = s == Statistic::Psi || s == Statistic::TwinSum || s == Statistic::H || s == Statistic::G;

  std::vector<Point> points;
  for (const Field& field : fields) {
    const auto moduli = parse_all(grid.moduli, field);
    const auto residues = parse_all(grid.residues, field);
    const auto offsets = parse_all(grid.offsets, field);
    std::vector<std::optional<Poly>> qs, as, ks;
    if (use_modulus) qs.assign(moduli.begin(), moduli.end()); else qs.emplace_back();
    if (use_residue) as.assign(residues.begin(), residues.end()); else as.emplace_back();
    if (use_offset) ks.assign(offsets.begin(), offsets.end()); else ks.emplace_back();
    for (unsigned n : grid.degrees) {
      for (const auto& q : qs) {
        for (const auto& a : as) {
          for (const auto& k : ks) points.push_back({field, n, q, a, k});
        }
      }
    }
  }
  return points;
}

ReportRow blank_row(const Point& pt, std::string_view stat) {
  ReportRow row;
  row.p = pt.field.p();
  row.nu = pt.field.nu();
  row.n = pt.n;
  row.modulus = text_of(pt.modulus);
  row.residue = text_of(pt.residue);
  row.offset = text_of(pt.offset);
  row.stat = std::string(stat);
  return row;
}

std::vector<ReportRow> evaluate(const ExperimentGrid& grid, const Point& pt, const ContextCache& contexts) {
  const Statistic s = grid.statistic;
  if (s == Statistic::Identities) {
    const StatsContext& ctx = contexts.get(pt.field, pt.n);
    ReportRow sum = blank_row(pt, "prime-poly");
    const BigInt qn = pow_big(ctx.q(), pt.n);
    const BigInt lam = prime_poly_sum(ctx);
    sum.value = to_string(lam);
    sum.predicted = to_string(qn);
    sum.ratio = ratio_text(Rational(lam), Rational(qn));
    sum.flags.emplace_back(lam == qn ? "exact" : "MISMATCH");
    ReportRow sq = blank_row(pt, "lambda-sq");
    const BigInt lsq = lambda_sq_sum(ctx);
    const BigInt closed = lambda_sq_closed_form(ctx.q(), pt.n);
    sq.value = to_string(lsq);
    sq.predicted = to_string(closed);
    sq.ratio = ratio_text(Rational(lsq), Rational(closed));
    sq.flags.emplace_back(lsq == closed ? "exact" : "MISMATCH");
    sq.flags.push_back("nq^n=" + to_string(BigInt(pt.n) * qn));
    return {sum, sq};
  }

  ReportRow row = blank_row(pt, statistic_name(s));
  if (s == Statistic::Jsum) {
    const Poly& q = *pt.modulus;
    if (q.is_zero() || q.is_constant()) throw PreconditionError(reason::kConstantModulus, format_poly(q));
    const auto cmp = jsum_check(q, pt.n, grid.max_degree.value_or(0));
    row.value = to_string(cmp.lhs);
    row.predicted = to_string(cmp.rhs);
    row.ratio = ratio_text(cmp.lhs, cmp.rhs);
    row.flags.push_back("rel_diff=" + to_string(cmp.relative_difference));
    row.flags.push_back("max_deg=" + std::to_string(cmp.truncation));
    return {row};
  }

  const StatsContext& ctx = contexts.get(pt.field, pt.n);
  switch (s) {
    case Statistic::Psi: {
      TwinParams params{pt.n, *pt.offset, pt.modulus, pt.residue};
      params.validate();
      const BigInt psi = psi_ap(ctx, params);
      const Rational mean(pow_big(ctx.q(), pt.n), ctx.totient(*pt.modulus));
      row.value = to_string(psi);
      row.predicted = to_string(mean);
      row.ratio = ratio_text(Rational(psi), mean);
      const Poly shifted = (*params.residue + *pt.offset) % *pt.modulus;
      if (shifted.is_zero() || !gcd(shifted, *pt.modulus).is_constant()) row.flags.emplace_back("non-coprime A+K");
      add_twin_flags(row, *pt.offset, mean, grid.max_degree);
      break;
    }
    case Statistic::TwinSum: {
      const BigInt v = twin_sum(ctx, *pt.offset);
      const auto c = singular_twin(*pt.offset, twin_truncation(*pt.offset, grid.max_degree));
      const Decimal predicted = c.value * Decimal(pow_big(ctx.q(), pt.n));
      row.value = to_string(v);
      row.predicted = to_string(predicted);
      row.ratio = ratio_text(Decimal(v), predicted);
      if (c.vanishes) row.flags.emplace_back("vanishing");
      row.flags.push_back("bare=" + to_string(pow_big(ctx.q(), pt.n)));
      break;
    }
    case Statistic::H:
      add_moment(row, ap_variance_twin(ctx, *pt.modulus, *pt.offset));
      break;
    case Statistic::G:
      add_moment(row, ap_absdev_twin(ctx, *pt.modulus, *pt.offset));
      break;
    case Statistic::Esq:
      add_moment(row, e_sq_total(ctx, *pt.modulus, *pt.residue, grid.k_range));
      break;
    case Statistic::KzPrime:
      add_moment(row, prime_ap_variance(ctx, *pt.modulus));
      break;
    default:
      throw std::logic_error("unhandled statistic");
  }
  return {row};
}

}  // namespace

std::vector<ReportRow> run(const ExperimentGrid& grid, const RunOptions& options) {
  std::vector<Field> fields;
  for (const auto& f : grid.fields) fields.push_back(Field::make(f.p, f.nu));
  const auto points = expand(grid, fields);

  const Parallelism inner = points.size() > 1 ? Parallelism{1} : options.par;
  ContextCache contexts(options, inner);
  if (grid.statistic != Statistic::Jsum) {
    for (const auto& pt : points) contexts.prepare(pt.field, pt.n);
  }

  std::mutex emit_mutex;
  auto batches = parallel_blocks<std::vector<ReportRow>>(points.size(), options.par, [&](std::size_t i) {
    const Point& pt = points[i];
    const auto start = std::chrono::steady_clock::now();
    std::vector<ReportRow> rows;
    try {
      rows = evaluate(grid, pt, contexts);
    } catch (const PreconditionError& e) {
      ReportRow skipped = blank_row(pt, grid.statistic == Statistic::Identities ? "identities" : statistic_name(grid.statistic));
      skipped.flags.push_back("skipped=" + e.reason());
      rows = {skipped};
    }
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    for (auto& r : rows) {
      if (options.timing) r.wall_ms = std::round(elapsed.count() * 1000.0) / 1000.0;
    }
    if (options.on_row) {
      std::lock_guard lock(emit_mutex);
      for (const auto& r : rows) options.on_row(r);
    }
    return rows;
  });

  std::vector<ReportRow> out;
  for (auto& b : batches) {
    for (auto& r : b) out.push_back(std::move(r));
  }
  sort_rows(out);
  return out;
}

}  // namespace fflab::lab
