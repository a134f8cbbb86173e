// Acceptance run: one PASS/FAIL line per criterion, details on stderr.
//
// usage: fflab_acceptance [cache-dir]

#include "fflab/lab/suites.hpp"

#include <chrono>
#include <iostream>
#include <sstream>

namespace {

struct Criterion {
  int number;
  const char* title;
  const char* suite;
};

constexpr Criterion kCriteria[] = {
    {1, "prime polynomial identity, q in {2,3,4,5,7}, n <= 8", "prime-poly"},
    {2, "Lambda^2 closed form and error budget", "lambda-sq"},
    {3, "single-prime variance budget and trend", "kz-variance"},
    {4, "twin correlation trend", "twin-trend"},
    {5, "dual-path exactness of H, G, sum E^2", "dual-path"},
    {6, "residue-class partition of the twin sum", "ap-partition"},
    {7, "singular series: nu equivalence, c(1) near 1, vanishing at q=2", "singular"},
    {8, "J-sum trend", "jsum-trend"},
    {9, "ratio reports reproducible across runs and worker counts", "reports"},
};

}  // namespace

int main(int argc, char** argv) {
  fflab::lab::SuiteOptions options;
  options.par = fflab::Parallelism{0};
  if (argc > 1) options.cache_dir = argv[1];

  int failed = 0;
  for (const auto& c : kCriteria) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<fflab::lab::Check> checks;
    std::string error;
    try {
      checks = fflab::lab::run_suite(c.suite, options);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::size_t asserted = 0, passed = 0;
    std::ostringstream failures;
    for (const auto& ch : checks) {
      if (!ch.asserted) continue;
      ++asserted;
      if (ch.pass) {
        ++passed;
      } else {
        failures << "\n    failed: " << ch.name << ": " << ch.detail;
      }
    }
    const bool ok = error.empty() && passed == asserted;
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.number << " (" << c.title << "): " << passed << '/'
              << asserted << " checks";
    if (!error.empty()) std::cout << ", error: " << error;
    std::cout << failures.str() << '\n' << std::flush;
    std::cerr << "  [" << c.suite << " took " << secs << " s]\n";
    fflab::lab::print_checks(std::cerr, checks);
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criterion/criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
