#include "fflab/lab/suites.hpp"

#include "fflab/lab/report.hpp"
#include "fflab/lab/runner.hpp"
#include "fflab/singular.hpp"
#include "fflab/twin_stats.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fflab::lab {

namespace {

using Suite = std::vector<Check> (*)(const SuiteOptions&);

std::string field_name(const Field& f) {
  return f.nu() == 1 ? "q=" + std::to_string(f.q()) : "q=" + std::to_string(f.q()) + "(" + std::to_string(f.p()) + "^" +
                                                          std::to_string(f.nu()) + ")";
}

std::string dec(const Decimal& d, int digits = 6) { return d.str(digits, std::ios_base::fmtflags(0)); }

Decimal abs_dec(const Decimal& d) { return d < 0 ? Decimal(-d) : d; }

void note(const SuiteOptions& o, const std::string& line) {
  if (o.log != nullptr) *o.log << line << '\n' << std::flush;
}

Poly first_irreducible(const Field& field, std::size_t d) {
  const MonicRange all = MonicRange::all(field, d);
  for (std::uint64_t i = 0; i < all.size(); ++i) {
    Poly f = all.at(i);
    if (is_irreducible(f)) return f;
  }
  throw std::logic_error("no irreducible of the requested degree");
}

Poly t_power(const Field& field, std::size_t k) { return Poly::monomial(field, 1, k); }

std::vector<Field> identity_fields() {
  return {Field::make(2), Field::make(3), Field::make(2, 2), Field::make(5), Field::make(7)};
}

// -- exact identities --------------------------------------------------------------

constexpr unsigned kIdentityMaxN = 8;

std::vector<Check> prime_poly_suite(const SuiteOptions& o) {
  std::vector<Check> out;
  for (const Field& field : identity_fields()) {
    const auto table = cached_sieve(field, kIdentityMaxN, o.cache_dir, o.par);
    for (unsigned n = 1; n <= kIdentityMaxN; ++n) {
      const StatsContext ctx(table, n, o.par);
      const BigInt sum = prime_poly_sum(ctx);
      const BigInt qn = pow_big(field.q(), n);
      out.push_back({"prime-poly " + field_name(field) + " n=" + std::to_string(n), sum == qn, true,
                     "sum Lambda = " + to_string(sum) + ", q^n = " + to_string(qn)});
    }
    note(o, "prime-poly: " + field_name(field) + " done");
  }
  return out;
}

// Per-polynomial von_mangoldt route, independent of the sieve.
std::vector<Check> prime_poly_direct_suite(const SuiteOptions& o) {
  std::vector<Check> out;
  for (const Field& field : identity_fields()) {
    for (unsigned n = 1; n <= kIdentityMaxN; ++n) {
      const BigInt sum = prime_poly_sum_direct(field, n, o.par);
      const BigInt qn = pow_big(field.q(), n);
      out.push_back({"prime-poly-direct " + field_name(field) + " n=" + std::to_string(n), sum == qn, true,
                     "sum Lambda = " + to_string(sum)});
    }
    note(o, "prime-poly-direct: " + field_name(field) + " done");
  }
  return out;
}

std::vector<Check> lambda_sq_suite(const SuiteOptions& o) {
  std::vector<Check> out;
  for (const Field& field : identity_fields()) {
    const auto table = cached_sieve(field, kIdentityMaxN, o.cache_dir, o.par);
    for (unsigned n = 1; n <= kIdentityMaxN; ++n) {
      const StatsContext ctx(table, n, o.par);
      const BigInt sum = lambda_sq_sum(ctx);
      const BigInt closed = lambda_sq_closed_form(field.q(), n);
      const std::string at = field_name(field) + " n=" + std::to_string(n);
      out.push_back({"lambda-sq closed form " + at, sum == closed, true,
                     to_string(sum) + " vs " + to_string(closed)});
      // (sum - n q^n)^2 <= (2 n^2)^2 q^n, exact
      const BigInt dev = sum - BigInt(n) * pow_big(field.q(), n);
      const BigInt lhs = dev * dev;
      const BigInt rhs = BigInt(4) * n * n * n * n * pow_big(field.q(), n);
      out.push_back({"lambda-sq budget " + at, lhs <= rhs, true,
                     "|sum - nq^n| = " + to_string(dev < 0 ? BigInt(-dev) : dev) + " <= 2n^2 q^(n/2) = " +
                         dec(Decimal(2 * n * n) * boost::multiprecision::sqrt(Decimal(pow_big(field.q(), n))))});
    }
  }
  return out;
}

// -- single-prime variance --------------------------------------------------------

std::vector<Check> kz_variance_suite(const SuiteOptions& o) {
  std::vector<Check> out;
  auto budget_check = [&](const Field& field, const Poly& q, unsigned n, const StatsContext& ctx) {
    const MomentReport r = prime_ap_variance(ctx, q);
    const Decimal dev = abs_dec(to_decimal(r.value - r.predicted));
    const std::size_t dq = q.deg();
    const Decimal bound =
        Decimal(10) * (Decimal(n * n) * boost::multiprecision::pow(Decimal(field.q()), Decimal(n) / 2) + Decimal(dq * dq));
    const std::string at = field_name(field) + " Q=" + format_poly(q) + " n=" + std::to_string(n);
    out.push_back({"kz dual-path " + at, r.paths_agree(), true, to_string(r.value)});
    const bool in_range = n <= dq;
    out.push_back({"kz budget " + at, dev <= bound, in_range,
                   "|G - (nq^n - q^2n/Phi)| = " + dec(dev) + ", bound " + dec(bound) +
                       (in_range ? "" : " (n > deg Q, where the bound is not claimed)")});
  };

  for (std::uint32_t p : {3U, 5U, 7U}) {
    const Field field = Field::make(p);
    const auto table = cached_sieve(field, 5, o.cache_dir, o.par);
    const std::vector<Poly> moduli{t_power(field, 1), t_power(field, 2), first_irreducible(field, 2)};
    for (unsigned n = 2; n <= 5; ++n) {
      const StatsContext ctx(table, n, o.par);
      for (const Poly& q : moduli) budget_check(field, q, n, ctx);
    }
  }
  for (std::uint32_t p : {3U, 5U}) {
    const Field field = Field::make(p);
    const auto table = cached_sieve(field, 5, o.cache_dir, o.par);
    const std::vector<Poly> moduli{t_power(field, 5), first_irreducible(field, 5)};
    for (unsigned n = 2; n <= 5; ++n) {
      const StatsContext ctx(table, n, o.par);
      for (const Poly& q : moduli) budget_check(field, q, n, ctx);
    }
  }

  // Part (2): squarefree Q = t^3 - t, n = deg Q - 1, ratio to q^n (deg Q - 1).
  std::optional<Decimal> prev;
  std::string trail;
  for (std::uint32_t p : {3U, 5U, 7U, 11U}) {
    const Field field = Field::make(p);
    const Poly q = t_power(field, 3) - t_power(field, 1);
    const StatsContext ctx(field, 2, o.par, o.cache_dir);
    const MomentReport r = prime_ap_variance(ctx, q);
    const Decimal ratio = to_decimal(r.value / *r.alt_predicted);
    const Decimal err = abs_dec(ratio - 1);
    trail += " q=" + std::to_string(p) + ":" + dec(ratio);
    out.push_back({"kz trend " + field_name(field), !prev || err <= 2 * *prev, true,
                   "ratio to q^n(deg Q-1) = " + dec(ratio) + ", |ratio-1| = " + dec(err)});
    prev = err;
  }
  note(o, "kz trend ratios:" + trail);
  return out;
}

// -- twin trend -------------------------------------------------------------------

std::vector<Check> twin_trend_suite(const SuiteOptions& o) {
  std::vector<Check> out;
  for (unsigned n : {2U, 3U}) {
    std::optional<Decimal> prev, prev_ap;
    for (std::uint32_t p : {3U, 5U, 7U, 11U}) {
      const Field field = Field::make(p);
      const StatsContext ctx(field, n, o.par, o.cache_dir);
      const Poly one = Poly::constant(field, 1);
      const BigInt v = twin_sum(ctx, one);
      const auto c = singular_twin(one, default_twin_truncation(one));
      const Decimal qn(pow_big(p, n));
      const Decimal dev = abs_dec(Decimal(v) / (c.value * qn) - 1);
      const Decimal limit = Decimal(5) / boost::multiprecision::sqrt(Decimal(p));
      const std::string at = field_name(field) + " n=" + std::to_string(n);
      out.push_back({"twin deviation " + at, dev <= limit, true,
                     "psi_f = " + to_string(v) + ", c(1) = " + dec(c.value, 10) + ", |psi/(c q^n) - 1| = " + dec(dev) +
                         " <= 5/sqrt(q) = " + dec(limit)});
      out.push_back({"twin monotone " + at, !prev || dev <= 2 * *prev, true,
                     prev ? "previous " + dec(*prev) + ", now " + dec(dev) : "first point"});
      prev = dev;

      // Equidistribution over classes mod t.
      const Poly t = t_power(field, 1);
      const Decimal phi(ctx.totient(t));
      Decimal worst = 0, worst_shifted = 0;
      for (const Poly& a : coprime_residues(t)) {
        const Decimal psi(psi_ap(ctx, t, a, one));
        const Decimal d = abs_dec(psi * phi / qn - 1);
        worst = std::max(worst, d);
        // A = -K puts f+K in the class of 0, where Lambda(f+K) is almost always 0.
        if (!(a + one).is_zero()) worst_shifted = std::max(worst_shifted, d);
      }
      out.push_back({"twin AP monotone " + at, !prev_ap || worst <= 2 * *prev_ap, true,
                     "max_A |psi Phi/q^n - 1| = " + dec(worst)});
      out.push_back({"twin AP with A+K a unit " + at, true, false, "max |psi Phi/q^n - 1| = " + dec(worst_shifted)});
      prev_ap = worst;
    }
  }
  return out;
}

// -- J-sum --------------------------------------------------------------------------

std::vector<Check> jsum_trend_suite(const SuiteOptions& o) {
  std::vector<Check> out;
  for (unsigned j : {0U, 1U, 2U}) {
    std::optional<Decimal> prev;
    for (std::uint32_t p : {3U, 5U, 7U}) {
      const Field field = Field::make(p);
      const auto cmp = jsum_check(t_power(field, 1), j);
      const std::string at = field_name(field) + " j=" + std::to_string(j);
      const std::string detail = "lhs " + dec(cmp.lhs, 10) + ", rhs " + dec(cmp.rhs, 10) + ", rel diff " +
                                 dec(cmp.relative_difference) + ", D " + std::to_string(cmp.truncation);
      out.push_back({"jsum decreasing " + at, !prev || cmp.relative_difference < *prev, true, detail});
      if (p == 7) out.push_back({"jsum at q=7 " + at, cmp.relative_difference <= Decimal("0.5"), true, detail});
      prev = cmp.relative_difference;
    }
    note(o, "jsum j=" + std::to_string(j) + " done");
  }
  return out;
}

// -- exact algebra over the small grid ---------------------------------------------

std::vector<Field> small_fields() { return {Field::make(2), Field::make(3), Field::make(2, 2), Field::make(5)}; }

std::vector<Poly> small_moduli(const Field& field, unsigned n) {
  std::vector<Poly> out;
  for (std::size_t d = 1; d <= std::min(2U, n); ++d) {
    const MonicRange all = MonicRange::all(field, d);
    for (std::uint64_t i = 0; i < all.size(); ++i) out.push_back(all.at(i));
  }
  return out;
}

std::vector<Check> dual_path_suite(const SuiteOptions& o) {
  std::vector<Check> out;
  for (const Field& field : small_fields()) {
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // stat -> (points, mismatches)
    std::string first_mismatch;
    auto record = [&](const std::string& stat, const MomentReport& r, const std::string& at) {
      auto& [points, bad] = tally[stat];
      ++points;
      if (!r.paths_agree()) {
        ++bad;
        if (first_mismatch.empty()) first_mismatch = stat + " " + at;
      }
    };
    for (unsigned n = 1; n <= 4; ++n) {
      const StatsContext ctx(field, n, o.par, o.cache_dir);
      std::vector<Poly> offsets{Poly::constant(field, 1)};
      if (n >= 2) offsets.push_back(t_power(field, 1));
      for (const Poly& q : small_moduli(field, n)) {
        const std::string at = "n=" + std::to_string(n) + " Q=" + format_poly(q);
        for (const Poly& k : offsets) {
          record("H", ap_variance_twin(ctx, q, k), at);
          record("G", ap_absdev_twin(ctx, q, k), at);
        }
        for (const Poly& a : coprime_residues(q)) {
          record("esq", e_sq_total(ctx, q, a, KRange::Monic), at);
          if (field.q() <= 3) record("esq-all", e_sq_total(ctx, q, a, KRange::AllNonzero), at);
        }
      }
    }
    for (const auto& [stat, t] : tally) {
      out.push_back({"dual-path " + stat + " " + field_name(field), t.second == 0, true,
                     std::to_string(t.first) + " points, " + std::to_string(t.second) + " mismatches" +
                         (first_mismatch.empty() ? "" : ", first " + first_mismatch)});
    }
    note(o, "dual-path: " + field_name(field) + " done");
  }
  return out;
}

std::vector<Check> ap_partition_suite(const SuiteOptions& o) {
  std::vector<Check> out;
  for (const Field& field : small_fields()) {
    std::size_t points = 0, bad = 0;
    for (unsigned n = 1; n <= 4; ++n) {
      const StatsContext ctx(field, n, o.par, o.cache_dir);
      const auto offsets = offsets_in_range(field, n, KRange::AllNonzero);
      for (const Poly& q : small_moduli(field, n)) {
        const std::uint64_t classes = checked_pow(field.q(), static_cast<unsigned>(q.deg()));
        for (const Poly& k : offsets) {
          BigInt total = 0;
          for (std::uint64_t a = 0; a < classes; ++a) total += psi_class(ctx, q, residue_from_index(field, q.deg(), a), k);
          ++points;
          if (total != twin_sum(ctx, k)) ++bad;
        }
      }
    }
    out.push_back({"ap-partition " + field_name(field), bad == 0, true,
                   std::to_string(points) + " (n, Q, K) points, " + std::to_string(bad) + " mismatches"});
  }
  return out;
}

// -- singular series ----------------------------------------------------------------

std::vector<Check> singular_suite(const SuiteOptions& o) {
  std::vector<Check> out;
  std::size_t compared = 0, bad = 0, fields = 0;
  for (std::uint32_t p = 2; p <= 125; ++p) {
    if (!is_prime(p)) continue;
    for (std::uint32_t nu = 1, q = p; q <= 125; ++nu, q *= p) {
      const Field field = Field::make(p, nu);
      ++fields;
      unsigned max_d = 0;
      for (std::uint64_t norm = q; norm <= 125; norm *= q) ++max_d;
      const auto table = sieve_irreducibles(field, max_d);
      const std::uint64_t qq = q;
      const std::vector<std::vector<std::uint64_t>> index_sets{
          {0, 1}, {0, qq}, {0, 1, qq}, {1, qq, qq + 1, qq * qq}, {0, 2, qq + 2}, {3, qq * qq + 1}};
      std::vector<TupleOffsets> tuples;
      for (const auto& idx : index_sets) {
        if (std::set<std::uint64_t>(idx.begin(), idx.end()).size() != idx.size()) continue;
        if (*std::max_element(idx.begin(), idx.end()) >= qq * qq * qq) continue;
        std::vector<Poly> h;
        for (auto i : idx) h.push_back(residue_from_index(field, 3, i));
        tuples.emplace_back(std::move(h));
      }
      for (unsigned d = 1; d <= max_d; ++d) {
        for (const Poly& prime : table.polys(d)) {
          for (const auto& t : tuples) {
            ++compared;
            if (nu_count(prime, t) != nu_count_bruteforce(prime, t)) ++bad;
          }
        }
      }
    }
  }
  out.push_back({"nu equivalence |P| <= 125", bad == 0, true,
                 std::to_string(fields) + " fields, " + std::to_string(compared) + " (P, tuple) pairs, " +
                     std::to_string(bad) + " mismatches"});

  for (auto [p, nu] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {11, 1}}) {
    const Field field = Field::make(p, nu);
    const Poly one = Poly::constant(field, 1);
    const unsigned d = default_twin_truncation(one);
    const auto c = singular_twin(one, d);
    const double limit = 3.0 / field.q();
    const Decimal dev = abs_dec(c.value - 1);
    out.push_back({"c(1) near 1 " + field_name(field), c.tail_bound < Decimal("1e-12") && dev <= Decimal(limit), true,
                   "c(1) = " + dec(c.value, 15) + ", |c-1| = " + dec(dev) + " <= 3/q, D = " + std::to_string(d) +
                       ", tail " + dec(c.tail_bound, 3)});
  }

  const Field f2 = Field::make(2);
  const Poly one = Poly::constant(f2, 1);
  const auto twin = singular_twin(one, default_twin_truncation(one));
  const auto general = singular_series(TupleOffsets({Poly(f2), one}), 4);
  out.push_back({"c(1) vanishes at q=2", twin.vanishes && twin.value == 0 && general.vanishes && general.value == 0, true,
                 "nu_t = |t| = 2"});
  (void)o;
  return out;
}

// -- report reproducibility ----------------------------------------------------------

std::vector<Check> reports_suite(const SuiteOptions& o) {
  std::vector<Check> out;
  std::vector<ExperimentGrid> grids;
  for (std::uint32_t p : {3U, 5U, 7U}) {
    const Field field = Field::make(p);
    const std::vector<std::string> moduli{format_poly(t_power(field, 1)),
                                          format_poly(t_power(field, 1) + Poly::constant(field, 1)),
                                          format_poly(first_irreducible(field, 2))};
    for (Statistic s : {Statistic::H, Statistic::G, Statistic::Esq}) {
      ExperimentGrid g;
      g.statistic = s;
      g.fields = {{p, 1}};
      g.degrees = {2, 3, 4};
      g.moduli = moduli;
      grids.push_back(g);
    }
  }

  auto render = [&](unsigned workers, std::vector<ReportRow>* keep) {
    RunOptions ro;
    ro.par = Parallelism{workers};
    ro.timing = false;
    ro.cache_dir = o.cache_dir;
    std::vector<ReportRow> rows;
    for (const auto& g : grids) {
      auto part = run(g, ro);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    sort_rows(rows);
    std::ostringstream csv, json;
    write_csv(csv, rows);
    write_json(json, rows);
    if (keep != nullptr) *keep = rows;
    return std::make_pair(csv.str(), json.str());
  };

  std::vector<ReportRow> rows;
  const auto first = render(1, &rows);
  const auto again = render(1, nullptr);
  const unsigned many = std::max(4U, o.par.resolved());
  const auto parallel = render(many, nullptr);

  std::size_t agree = 0, skipped = 0;
  for (const auto& r : rows) {
    agree += std::count(r.flags.begin(), r.flags.end(), "dual-path=ok");
    skipped += r.skipped() ? 1 : 0;
  }
  out.push_back({"report rows dual-path", agree == rows.size() && skipped == 0, true,
                 std::to_string(rows.size()) + " rows, " + std::to_string(agree) + " agree, " + std::to_string(skipped) +
                     " skipped"});
  out.push_back({"reports identical across runs", first == again, true, std::to_string(first.first.size()) + " CSV bytes"});
  out.push_back({"reports identical across worker counts", first == parallel, true,
                 "1 vs " + std::to_string(many) + " workers"});

  std::istringstream csv_in(first.first), json_in(first.second);
  std::ostringstream csv_out, json_out;
  write_csv(csv_out, read_csv(csv_in));
  write_json(json_out, read_json(json_in));
  out.push_back({"report round-trip", csv_out.str() == first.first && json_out.str() == first.second, true,
                 "CSV and JSON re-emitted byte-identically"});

  if (o.log != nullptr) {
    *o.log << "ratio table (stat, q, n, Q, ratio):\n";
    for (const auto& r : rows) {
      *o.log << "  " << r.stat << " q=" << r.p << " n=" << r.n << " Q=" << r.modulus << " ratio=" << r.ratio << '\n';
    }
  }
  return out;
}

std::vector<Check> prime_poly_full(const SuiteOptions& o) {
  auto out = prime_poly_suite(o);
  auto direct = prime_poly_direct_suite(o);
  out.insert(out.end(), direct.begin(), direct.end());
  return out;
}

const std::vector<std::pair<std::string, Suite>>& registry() {
  static const std::vector<std::pair<std::string, Suite>> r{
      {"prime-poly", prime_poly_full},     {"lambda-sq", lambda_sq_suite},   {"kz-variance", kz_variance_suite},
      {"twin-trend", twin_trend_suite},    {"jsum-trend", jsum_trend_suite}, {"dual-path", dual_path_suite},
      {"ap-partition", ap_partition_suite}, {"singular", singular_suite},     {"reports", reports_suite},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    v.emplace_back("all");
    return v;
  }();
  return names;
}

std::vector<Check> run_suite(std::string_view name, const SuiteOptions& options) {
  if (name == "all") {
    std::vector<Check> out;
    for (const auto& [n, fn] : registry()) {
      auto part = fn(options);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  for (const auto& [n, fn] : registry()) {
    if (n == name) return fn(options);
  }
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass || !c.asserted; });
}

void print_checks(std::ostream& os, const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    const char* tag = !c.asserted ? "INFO" : c.pass ? "PASS" : "FAIL";
    os << tag << ' ' << c.name << ": " << c.detail << '\n';
  }
}

}  // namespace fflab::lab
