#pragma once

// Report rows and their CSV / JSON serialisation.

#include "fflab/lab/grid.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fflab::lab {

inline constexpr std::array<const char*, 12> kColumns = {"p",   "nu",    "n",         "modulus", "residue", "offset",
                                                         "stat", "value", "predicted", "ratio",   "flags",   "wall_ms"};

/// One grid point. Exact values are integers or "num/den" strings; decimal
/// predictions and ratios carry 30 significant digits. Flags are short
/// "key" or "key=value" items.
struct ReportRow {
  std::uint32_t p = 0;
  std::uint32_t nu = 1;
  unsigned n = 0;
  std::string modulus;
  std::string residue;
  std::string offset;
  std::string stat;
  std::string value;
  std::string predicted;
  std::string ratio;
  std::vector<std::string> flags;
  std::optional<double> wall_ms;

  bool skipped() const;
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

/// Orders rows by (p, nu, n, modulus, residue, offset, stat).
void sort_rows(std::vector<ReportRow>& rows);

/// RFC 4180 CSV with a header line.
void write_csv(std::ostream& os, std::span<const ReportRow> rows);
std::vector<ReportRow> read_csv(std::istream& is);

/// {"rows": [{column: value, ...}, ...]}, pretty-printed.
void write_json(std::ostream& os, std::span<const ReportRow> rows);
std::vector<ReportRow> read_json(std::istream& is);

void write_report(std::ostream& os, std::span<const ReportRow> rows, Format format);
std::vector<ReportRow> read_report(std::istream& is, Format format);

}  // namespace fflab::lab
