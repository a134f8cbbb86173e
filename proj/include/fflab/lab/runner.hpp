#pragma once

// Evaluates an ExperimentGrid point by point.

#include "fflab/lab/grid.hpp"
#include "fflab/lab/report.hpp"
#include "fflab/parallel.hpp"

#include <filesystem>
#include <functional>
#include <vector>

namespace fflab::lab {

struct RunOptions {
  /// Worker budget shared by grid points and the sieve.
  Parallelism par;
  /// Record wall_ms. Off gives byte-identical reports across runs.
  bool timing = true;
  /// Sieve cache; empty disables caching.
  std::filesystem::path cache_dir;
  /// Called once per finished row, possibly from a worker thread (calls are
  /// serialised).
  std::function<void(const ReportRow&)> on_row;
};

/// Rows for every grid point, sorted by coordinates. Precondition failures
/// become rows flagged "skipped=<reason>"; malformed polynomial text throws
/// std::invalid_argument.
std::vector<ReportRow> run(const ExperimentGrid& grid, const RunOptions& options = {});

}  // namespace fflab::lab
