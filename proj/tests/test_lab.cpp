#include "doctest.h"
#include "fflab/lab/grid.hpp"
#include "fflab/lab/report.hpp"
#include "fflab/lab/runner.hpp"
#include "fflab/lab/suites.hpp"
#include "oracle.hpp"

#include <sstream>
#include <stdexcept>

using namespace fflab;
using namespace fflab::lab;

namespace {

ExperimentGrid grid_of(const std::string& text) {
  std::istringstream is(text);
  return ExperimentGrid::parse(is);
}

std::vector<ReportRow> run_quiet(const ExperimentGrid& g, unsigned workers = 1) {
  RunOptions ro;
  ro.par = Parallelism{workers};
  ro.timing = false;
  return run(g, ro);
}

std::string csv_of(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

std::string json_of(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  write_json(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("grid parsing") {
  const auto g = grid_of(
      "# sweep\n"
      "stat = esq\n"
      "fields = 3 5 2:2   # three fields\n"
      "n = 2..4 6\n"
      "modulus = 0,1 1,0,1\n"
      "residue = 1 2\n"
      "k-range = all\n"
      "max-deg = 9\n"
      "format = json\n");
  CHECK(g.statistic == Statistic::Esq);
  CHECK(g.fields == std::vector<FieldParams>{{3, 1}, {5, 1}, {2, 2}});
  CHECK(g.degrees == std::vector<unsigned>{2, 3, 4, 6});
  CHECK(g.moduli == std::vector<std::string>{"0,1", "1,0,1"});
  CHECK(g.residues == std::vector<std::string>{"1", "2"});
  CHECK(g.offsets == std::vector<std::string>{"1"});
  CHECK(g.k_range == KRange::AllNonzero);
  CHECK(g.max_degree == 9U);
  CHECK(g.format == Format::Json);
}

TEST_CASE("grid parsing errors") {
  CHECK_THROWS_AS(grid_of("fields = 3\nn = 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(grid_of("stat = bogus\nfields = 3\nn = 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(grid_of("stat = H\nfields = 3\nn = 2\n"), std::invalid_argument);  // no modulus
  CHECK_THROWS_AS(grid_of("stat = identities\nfields = 3\nn = 4..2\n"), std::invalid_argument);
  CHECK_THROWS_AS(grid_of("stat = identities\nfields = 3\nn = 2\ncolour = red\n"), std::invalid_argument);
  CHECK_THROWS_AS(grid_of("stat = identities\nfields = x\nn = 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(grid_of("stat = identities\nfields = 3\nn 2\n"), std::invalid_argument);
}

TEST_CASE("identities rows match q^n exactly") {
  const auto rows = run_quiet(grid_of("stat = identities\nfields = 2 3\nn = 1..4\n"));
  REQUIRE(rows.size() == 16);
  for (const auto& r : rows) {
    CHECK(r.value == r.predicted);
    CHECK(r.ratio == "1.00000000000000000000000000000e+00");
    CHECK(r.flags.front() == "exact");
    if (r.stat == "prime-poly") CHECK(r.value == to_string(pow_big(r.p, r.n)));
  }
}

TEST_CASE("psi with a non-coprime residue is a skipped row") {
  const auto rows = run_quiet(grid_of("stat = psi\nfields = 3\nn = 2\nmodulus = 0,1\nresidue = 0 1\noffset = 1\n"));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].residue == "0");
  CHECK(rows[0].skipped());
  CHECK(rows[0].flags == std::vector<std::string>{"skipped=non-coprime residue"});
  CHECK(rows[0].value.empty());
  CHECK(rows[1].value == "4");
  CHECK(rows[1].predicted == "9/2");
  CHECK_FALSE(rows[1].skipped());
}

TEST_CASE("H row equals the brute-force variance") {
  const auto rows = run_quiet(grid_of("stat = H\nfields = 3\nn = 2\nmodulus = 0,1\noffset = 1\n"));
  REQUIRE(rows.size() == 1);
  const Field f3 = Field::make(3);
  const Poly one = Poly::constant(f3, 1);
  Rational h = 0;
  for (Elem a : {1U, 2U}) {
    BigInt psi = 0;
    for (const Poly& f : oracle::monics(f3, 2)) {
      if (f[0] == a) psi += oracle::lambda(f) * oracle::lambda(f + one);
    }
    h += (Rational(psi) - Rational(9, 2)) * (Rational(psi) - Rational(9, 2));
  }
  CHECK(rows[0].value == to_string(h));
  CHECK(rows[0].value == "41/2");
  CHECK(rows[0].predicted == "324");
  CHECK(rows[0].flags.front() == "dual-path=ok");
}

TEST_CASE("invalid polynomial text aborts the run") {
  CHECK_THROWS_AS(run_quiet(grid_of("stat = twin-sum\nfields = 3\nn = 2\noffset = 1,7\n")), std::invalid_argument);
}

TEST_CASE("precondition failures across statistics are skipped, not fatal") {
  const auto rows = run_quiet(grid_of("stat = twin-sum\nfields = 3\nn = 2\noffset = 0 0,0,1 1\n"));
  REQUIRE(rows.size() == 3);
  int skipped = 0;
  for (const auto& r : rows) skipped += r.skipped() ? 1 : 0;
  CHECK(skipped == 2);
  const auto below = run_quiet(grid_of("stat = G\nfields = 3\nn = 1\nmodulus = 0,0,1\noffset = 1\n"));
  CHECK(below.at(0).flags == std::vector<std::string>{"skipped=n below modulus degree"});
}

TEST_CASE("reports are identical across worker counts and round-trip") {
  const auto g = grid_of(
      "stat = esq\nfields = 3 5\nn = 2 3\nmodulus = 0,1 1,1\nresidue = 1 2\n");
  const auto one = run_quiet(g, 1);
  const auto three = run_quiet(g, 3);
  CHECK(csv_of(one) == csv_of(three));
  CHECK(json_of(one) == json_of(three));

  std::istringstream csv_in(csv_of(one));
  CHECK(csv_of(read_csv(csv_in)) == csv_of(one));
  std::istringstream json_in(json_of(one));
  CHECK(json_of(read_json(json_in)) == json_of(one));
}

TEST_CASE("CSV quoting and wall time round-trip") {
  ReportRow r;
  r.p = 5;
  r.n = 3;
  r.modulus = "1,0,1";
  r.stat = "weird";
  r.value = "say \"hi\"";
  r.flags = {"a", "b=1,2"};
  r.wall_ms = 12.5;
  const std::vector<ReportRow> rows{r};
  const std::string text = csv_of(rows);
  CHECK(text.find("\"1,0,1\"") != std::string::npos);
  CHECK(text.find("\"say \"\"hi\"\"\"") != std::string::npos);
  CHECK(text.find("a|\"b=1,2\"") == std::string::npos);
  CHECK(text.find("\"a|b=1,2\"") != std::string::npos);
  std::istringstream is(text);
  CHECK(read_csv(is) == rows);
  std::istringstream js(json_of(rows));
  CHECK(read_json(js) == rows);

  std::istringstream bad("p,nu\n1,2\n");
  CHECK_THROWS_AS(read_csv(bad), std::invalid_argument);
}

TEST_CASE("rows are sorted by coordinates") {
  const auto rows = run_quiet(grid_of("stat = twin-sum\nfields = 5 3\nn = 3 2\noffset = 1\n"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].p == 3);
  CHECK(rows[0].n == 2);
  CHECK(rows[3].p == 5);
  CHECK(rows[3].n == 3);
}

TEST_CASE("jsum rows carry the comparison") {
  const auto rows = run_quiet(grid_of("stat = jsum\nfields = 5\nn = 1\nmodulus = 0,1\nmax-deg = 4\n"));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].predicted == "6.50000000000000000000000000000e+00");
  CHECK(rows[0].flags.back() == "max_deg=4");
}

TEST_CASE("verify rejects unknown suites and runs small ones") {
  CHECK_THROWS_AS(run_suite("nope"), std::invalid_argument);
  CHECK(suite_names().back() == "all");
  const auto checks = run_suite("dual-path");
  CHECK(all_passed(checks));
  CHECK_FALSE(checks.empty());
}
