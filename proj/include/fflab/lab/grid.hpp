#pragma once

// Declarative experiment sweeps. A grid file is a flat list of
//
//   key = value value ...
//
// lines; '#' starts a comment, list items are whitespace separated and
// polynomials use the canonical text format. Keys:
//
//   stat      psi | twin-sum | H | G | esq | kz-prime | jsum | identities
//   fields    p or p:nu, e.g. "3 5 2:2"
//   n         degrees; "a..b" expands to a range (for jsum these are j)
//   modulus   moduli Q
//   residue   residues A (default 1)
//   offset    offsets K (default 1)
//   k-range   monic | all
//   max-deg   truncation override for singular-series factors
//   format    csv | json

#include "fflab/twin_stats.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fflab::lab {

enum class Statistic { Psi, TwinSum, H, G, Esq, KzPrime, Jsum, Identities };

std::string_view statistic_name(Statistic s);
/// Throws std::invalid_argument for an unknown name.
Statistic parse_statistic(std::string_view name);

enum class Format { Csv, Json };
Format parse_format(std::string_view name);

struct FieldParams {
  std::uint32_t p = 0;
  std::uint32_t nu = 1;
  friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

struct ExperimentGrid {
  Statistic statistic = Statistic::Identities;
  std::vector<FieldParams> fields;
  std::vector<unsigned> degrees;
  std::vector<std::string> moduli;
  std::vector<std::string> residues{"1"};
  std::vector<std::string> offsets{"1"};
  KRange k_range = KRange::Monic;
  std::optional<unsigned> max_degree;
  std::optional<Format> format;

  /// Throws std::invalid_argument with the offending line on bad input.
  static ExperimentGrid parse(std::istream& is);
  static ExperimentGrid load(const std::filesystem::path& path);
};

}  // namespace fflab::lab
