#include "fflab/lab/grid.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace fflab::lab {

namespace {

constexpr std::pair<Statistic, std::string_view> kNames[] = {
    {Statistic::Psi, "psi"}, {Statistic::TwinSum, "twin-sum"}, {Statistic::H, "H"},
    {Statistic::G, "G"},     {Statistic::Esq, "esq"},           {Statistic::KzPrime, "kz-prime"},
    {Statistic::Jsum, "jsum"}, {Statistic::Identities, "identities"},
};

unsigned to_unsigned(std::string_view text) {
  unsigned v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("expected a non-negative integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

FieldParams to_field(const std::string& w) {
  const auto colon = w.find(':');
  FieldParams f;
  f.p = to_unsigned(std::string_view(w).substr(0, colon));
  if (colon != std::string::npos) f.nu = to_unsigned(std::string_view(w).substr(colon + 1));
  return f;
}

void append_degrees(const std::string& w, std::vector<unsigned>& out) {
  const auto dots = w.find("..");
  if (dots == std::string::npos) {
    out.push_back(to_unsigned(w));
    return;
  }
  const unsigned lo = to_unsigned(std::string_view(w).substr(0, dots));
  const unsigned hi = to_unsigned(std::string_view(w).substr(dots + 2));
  if (lo > hi) throw std::invalid_argument("empty degree range '" + w + "'");
  for (unsigned d = lo; d <= hi; ++d) out.push_back(d);
}

}  // namespace

std::string_view statistic_name(Statistic s) {
  for (const auto& [stat, name] : kNames) {
    if (stat == s) return name;
  }
  throw std::logic_error("unnamed statistic");
}

Statistic parse_statistic(std::string_view name) {
  for (const auto& [stat, n] : kNames) {
    if (n == name) return stat;
  }
  throw std::invalid_argument("unknown statistic '" + std::string(name) + "'");
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw std::invalid_argument("unknown format '" + std::string(name) + "'");
}

ExperimentGrid ExperimentGrid::parse(std::istream& is) {
  ExperimentGrid g;
  bool have_stat = false;
  std::size_t lineno = 0;
  for (std::string line; std::getline(is, line);) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const auto values = words(line.substr(eq + 1));
    if (values.empty()) throw std::invalid_argument("line " + std::to_string(lineno) + ": no value for '" + key + "'");
    try {
      if (key == "stat") {
        if (values.size() != 1) throw std::invalid_argument("stat takes one value");
        g.statistic = parse_statistic(values[0]);
        have_stat = true;
      } else if (key == "fields") {
        g.fields.clear();
        for (const auto& w : values) g.fields.push_back(to_field(w));
      } else if (key == "n") {
        g.degrees.clear();
        for (const auto& w : values) append_degrees(w, g.degrees);
      } else if (key == "modulus") {
        g.moduli = values;
      } else if (key == "residue") {
        g.residues = values;
      } else if (key == "offset") {
        g.offsets = values;
      } else if (key == "k-range") {
        if (values.size() != 1 || (values[0] != "monic" && values[0] != "all")) {
          throw std::invalid_argument("k-range is monic or all");
        }
        g.k_range = values[0] == "all" ? KRange::AllNonzero : KRange::Monic;
      } else if (key == "max-deg") {
        if (values.size() != 1) throw std::invalid_argument("max-deg takes one value");
        g.max_degree = to_unsigned(values[0]);
      } else if (key == "format") {
        if (values.size() != 1) throw std::invalid_argument("format takes one value");
        g.format = parse_format(values[0]);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_stat) throw std::invalid_argument("grid has no 'stat'");
  if (g.fields.empty()) throw std::invalid_argument("grid has no 'fields'");
  if (g.degrees.empty()) throw std::invalid_argument("grid has no 'n'");
  const bool needs_modulus = g.statistic != Statistic::TwinSum && g.statistic != Statistic::Identities;
  if (needs_modulus && g.moduli.empty()) throw std::invalid_argument("grid has no 'modulus'");
  return g;
}

ExperimentGrid ExperimentGrid::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid file " + path.string());
  return parse(in);
}

}  // namespace fflab::lab
