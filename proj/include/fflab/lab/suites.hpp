#pragma once

// Named verification suites. Each returns a list of checks; a suite passes
// when every asserted check passes. Unasserted checks are reported only.

#include "fflab/parallel.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fflab::lab {

struct Check {
  std::string name;
  bool pass = true;
  bool asserted = true;
  std::string detail;
};

struct SuiteOptions {
  Parallelism par;
  std::filesystem::path cache_dir;
  /// Receives tables and progress notes when set.
  std::ostream* log = nullptr;
};

/// prime-poly, lambda-sq, kz-variance, twin-trend, jsum-trend, dual-path,
/// ap-partition, singular, reports, and "all".
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite.
std::vector<Check> run_suite(std::string_view name, const SuiteOptions& options = {});

bool all_passed(const std::vector<Check>& checks);

/// "PASS name: detail" / "FAIL ..." / "INFO ..." lines.
void print_checks(std::ostream& os, const std::vector<Check>& checks);

}  // namespace fflab::lab
