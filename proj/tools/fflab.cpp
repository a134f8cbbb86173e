// fflab: command-line front end for the function-field laboratory.

#include "fflab/lab/grid.hpp"
#include "fflab/lab/report.hpp"
#include "fflab/lab/runner.hpp"
#include "fflab/lab/suites.hpp"
#include "fflab/singular.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using namespace fflab;
using namespace fflab::lab;

struct Common {
  std::uint32_t p = 0;
  std::uint32_t nu = 1;
  unsigned workers = 1;
  std::string cache_dir;
  std::string format = "csv";
  bool no_timing = false;
};

void add_field_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--p", c.p, "field characteristic")->required();
  cmd->add_option("--nu", c.nu, "extension degree")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--workers", c.workers, "worker threads (0 = all cores)")->capture_default_str();
  cmd->add_flag("--no-timing", c.no_timing, "leave wall_ms empty for reproducible output");
}

std::filesystem::path cache_of(const Common& c) {
  return c.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(c.cache_dir);
}

int emit_grid(const ExperimentGrid& grid, const Common& c, std::ostream& os) {
  RunOptions ro;
  ro.par = Parallelism{c.workers};
  ro.timing = !c.no_timing;
  ro.cache_dir = cache_of(c);
  const auto rows = run(grid, ro);
  write_report(os, rows, parse_format(c.format));
  for (const auto& r : rows) {
    if (r.skipped()) return 3;
  }
  return 0;
}

ExperimentGrid one_point(Statistic s, const Common& c, unsigned n) {
  ExperimentGrid g;
  g.statistic = s;
  g.fields = {{c.p, c.nu}};
  g.degrees = {n};
  return g;
}

std::vector<std::string> split_semicolons(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto semi = text.find(';', start);
    out.push_back(text.substr(start, semi - start));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact enumeration laboratory for prime polynomial statistics over F_q[t]"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--cache-dir", c.cache_dir, "sieve cache directory (default $FFLAB_CACHE_DIR or .cache)");

  unsigned n = 0, j = 0, max_deg = 0;
  std::string modulus, residue = "1", offset = "1", offsets, stat, k_range = "monic", out_path, grid_path, suite;

  auto* sieve = app.add_subcommand("sieve", "list monic irreducibles up to a degree in cache format");
  add_field_flags(sieve, c);
  sieve->add_option("--max-deg", max_deg, "largest degree")->required();
  sieve->add_option("--out", out_path, "output file (default stdout)");
  sieve->add_option("--workers", c.workers, "worker threads");

  auto* psi = app.add_subcommand("psi", "psi(n;Q,A,K) over one residue class");
  add_field_flags(psi, c);
  psi->add_option("--n", n, "degree")->required();
  psi->add_option("--modulus", modulus, "Q")->required();
  psi->add_option("--residue", residue, "A")->required();
  psi->add_option("--offset", offset, "K")->required();
  psi->add_option("--max-deg", max_deg, "singular-series truncation");
  add_output_flags(psi, c);

  auto* twin = app.add_subcommand("twin-sum", "sum over M_n of Lambda(f) Lambda(f+K)");
  add_field_flags(twin, c);
  twin->add_option("--n", n, "degree")->required();
  twin->add_option("--offset", offset, "K")->required();
  twin->add_option("--max-deg", max_deg, "singular-series truncation");
  add_output_flags(twin, c);

  auto* moments = app.add_subcommand("moments", "H, G, sum of E^2, or the single-prime variance");
  moments->add_option("--stat", stat, "H, G, esq or kz-prime")->required()->check(CLI::IsMember({"H", "G", "esq", "kz-prime"}));
  add_field_flags(moments, c);
  moments->add_option("--n", n, "degree")->required();
  moments->add_option("--modulus", modulus, "Q")->required();
  moments->add_option("--offset", offset, "K (H and G)")->capture_default_str();
  moments->add_option("--residue", residue, "A (esq)")->capture_default_str();
  moments->add_option("--k-range", k_range, "monic or all (esq)")->check(CLI::IsMember({"monic", "all"}))->capture_default_str();
  add_output_flags(moments, c);

  auto* singular = app.add_subcommand("singular", "truncated singular series of a tuple");
  add_field_flags(singular, c);
  singular->add_option("--offsets", offsets, "h_1;h_2;...")->required();
  singular->add_option("--max-deg", max_deg, "truncation (default: tail below 1e-12)");

  auto* jsum = app.add_subcommand("jsum", "sum over monic J of degree j of c(JQ)");
  add_field_flags(jsum, c);
  jsum->add_option("--modulus", modulus, "Q")->required();
  jsum->add_option("--j", j, "degree of J")->required();
  jsum->add_option("--max-deg", max_deg, "truncation (default per term)");
  add_output_flags(jsum, c);

  auto* runcmd = app.add_subcommand("run", "evaluate an experiment grid");
  runcmd->add_option("--grid", grid_path, "grid config")->required()->check(CLI::ExistingFile);
  runcmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  runcmd->add_option("--out", out_path, "report path")->required();
  runcmd->add_option("--workers", c.workers, "worker threads (0 = all cores)");
  runcmd->add_flag("--no-timing", c.no_timing, "leave wall_ms empty");

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--workers", c.workers, "worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sieve) {
      const auto table = cached_sieve(Field::make(c.p, c.nu), max_deg, cache_of(c), Parallelism{c.workers});
      if (out_path.empty()) {
        table.save(std::cout);
      } else {
        std::ofstream os(out_path);
        table.save(os);
        if (!os) throw std::runtime_error("cannot write " + out_path);
      }
      return 0;
    }
    if (*psi) {
      auto g = one_point(Statistic::Psi, c, n);
      g.moduli = {modulus};
      g.residues = {residue};
      g.offsets = {offset};
      if (max_deg != 0) g.max_degree = max_deg;
      return emit_grid(g, c, std::cout);
    }
    if (*twin) {
      auto g = one_point(Statistic::TwinSum, c, n);
      g.offsets = {offset};
      if (max_deg != 0) g.max_degree = max_deg;
      return emit_grid(g, c, std::cout);
    }
    if (*moments) {
      auto g = one_point(parse_statistic(stat), c, n);
      g.moduli = {modulus};
      g.offsets = {offset};
      g.residues = {residue};
      g.k_range = k_range == "all" ? KRange::AllNonzero : KRange::Monic;
      return emit_grid(g, c, std::cout);
    }
    if (*singular) {
      const Field field = Field::make(c.p, c.nu);
      std::vector<Poly> h;
      for (const auto& text : split_semicolons(offsets)) h.push_back(parse_poly(text, field));
      const TupleOffsets tuple(h);
      const unsigned d = max_deg != 0 ? max_deg : default_truncation(tuple);
      const auto v = singular_series(tuple, d);
      std::cout << "offsets: " << offsets << '\n'
                << "truncation: " << v.truncation << '\n'
                << "value: " << to_string(v.value) << '\n'
                << "tail_bound: " << (v.tail_bound < 0 ? std::string("unbounded") : to_string(v.tail_bound)) << '\n'
                << "vanishes: " << (v.vanishes ? "true" : "false") << '\n';
      return 0;
    }
    if (*jsum) {
      auto g = one_point(Statistic::Jsum, c, j);
      g.moduli = {modulus};
      if (max_deg != 0) g.max_degree = max_deg;
      return emit_grid(g, c, std::cout);
    }
    if (*runcmd) {
      auto grid = ExperimentGrid::load(grid_path);
      if (c.format.empty() || runcmd->count("--format") == 0) {
        c.format = grid.format == Format::Json ? "json" : "csv";
      }
      RunOptions ro;
      ro.par = Parallelism{c.workers};
      ro.timing = !c.no_timing;
      ro.cache_dir = cache_of(c);
      std::size_t done = 0;
      ro.on_row = [&](const ReportRow& r) {
        ++done;
        std::cerr << "[" << done << "] " << r.stat << " p=" << r.p << " nu=" << r.nu << " n=" << r.n
                  << (r.modulus.empty() ? "" : " Q=" + r.modulus) << (r.skipped() ? " skipped" : "") << '\n';
      };
      const auto rows = run(grid, ro);
      std::ofstream os(out_path, std::ios::binary);
      write_report(os, rows, parse_format(c.format));
      if (!os) throw std::runtime_error("cannot write " + out_path);
      std::cerr << rows.size() << " rows written to " << out_path << '\n';
      return 0;
    }
    if (*verify) {
      SuiteOptions so;
      so.par = Parallelism{c.workers};
      so.cache_dir = cache_of(c);
      so.log = &std::cerr;
      const auto checks = run_suite(suite, so);
      print_checks(std::cout, checks);
      const bool ok = all_passed(checks);
      std::cout << (ok ? "suite " + suite + ": PASS" : "suite " + suite + ": FAIL") << '\n';
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
