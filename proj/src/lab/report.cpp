#include "fflab/lab/report.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace fflab::lab {

namespace {

using Json = nlohmann::ordered_json;

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += '|';
    out += f;
  }
  return out;
}

std::vector<std::string> split_flags(const std::string& text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto bar = text.find('|', start);
    out.push_back(text.substr(start, bar - start));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

std::string format_ms(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("cannot format wall time");
  return std::string(buf, end);
}

template <class T>
T parse_number(const std::string& text, const char* column) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument(std::string("bad ") + column + " value '" + text + "'");
  }
  return v;
}

std::vector<std::string> cells_of(const ReportRow& r) {
  return {std::to_string(r.p), std::to_string(r.nu), std::to_string(r.n), r.modulus, r.residue, r.offset,
          r.stat,              r.value,              r.predicted,        r.ratio,   join_flags(r.flags),
          r.wall_ms ? format_ms(*r.wall_ms) : std::string()};
}

ReportRow row_of(const std::vector<std::string>& c) {
  if (c.size() != kColumns.size()) throw std::invalid_argument("report row has " + std::to_string(c.size()) + " cells");
  ReportRow r;
  r.p = parse_number<std::uint32_t>(c[0], "p");
  r.nu = parse_number<std::uint32_t>(c[1], "nu");
  r.n = parse_number<unsigned>(c[2], "n");
  r.modulus = c[3];
  r.residue = c[4];
  r.offset = c[5];
  r.stat = c[6];
  r.value = c[7];
  r.predicted = c[8];
  r.ratio = c[9];
  r.flags = split_flags(c[10]);
  if (!c[11].empty()) r.wall_ms = parse_number<double>(c[11], "wall_ms");
  return r;
}

void write_cell(std::ostream& os, const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) {
    os << cell;
    return;
  }
  os << '"';
  for (char ch : cell) {
    if (ch == '"') os << '"';
    os << ch;
  }
  os << '"';
}

// One CSV record, which may span lines inside quotes. False at end of input.
bool read_record(std::istream& is, std::vector<std::string>& cells) {
  cells.clear();
  if (is.peek() == std::char_traits<char>::eof()) return false;
  std::string cell;
  bool quoted = false;
  bool started = false;
  for (int ch; (ch = is.get()) != std::char_traits<char>::eof();) {
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          cell += '"';
          is.get();
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"' && !started) {
      quoted = true;
      started = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
      started = false;
    } else if (c == '\n') {
      break;
    } else if (c == '\r') {
      if (is.peek() == '\n') is.get();
      break;
    } else {
      cell += c;
      started = true;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV cell");
  cells.push_back(std::move(cell));
  return true;
}

}  // namespace

bool ReportRow::skipped() const {
  return std::any_of(flags.begin(), flags.end(), [](const std::string& f) { return f.starts_with("skipped="); });
}

void sort_rows(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.p, a.nu, a.n, a.modulus, a.residue, a.offset, a.stat) <
           std::tie(b.p, b.nu, b.n, b.modulus, b.residue, b.offset, b.stat);
  });
}

void write_csv(std::ostream& os, std::span<const ReportRow> rows) {
  for (std::size_t i = 0; i < kColumns.size(); ++i) os << (i ? "," : "") << kColumns[i];
  os << "\r\n";
  for (const auto& r : rows) {
    const auto cells = cells_of(r);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      write_cell(os, cells[i]);
    }
    os << "\r\n";
  }
}

std::vector<ReportRow> read_csv(std::istream& is) {
  std::vector<std::string> cells;
  if (!read_record(is, cells)) throw std::invalid_argument("empty CSV report");
  if (cells != std::vector<std::string>(kColumns.begin(), kColumns.end())) {
    throw std::invalid_argument("unexpected CSV header");
  }
  std::vector<ReportRow> rows;
  while (read_record(is, cells)) rows.push_back(row_of(cells));
  return rows;
}

void write_json(std::ostream& os, std::span<const ReportRow> rows) {
  Json out;
  out["rows"] = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["p"] = r.p;
    j["nu"] = r.nu;
    j["n"] = r.n;
    j["modulus"] = r.modulus;
    j["residue"] = r.residue;
    j["offset"] = r.offset;
    j["stat"] = r.stat;
    j["value"] = r.value;
    j["predicted"] = r.predicted;
    j["ratio"] = r.ratio;
    j["flags"] = r.flags;
    j["wall_ms"] = r.wall_ms ? Json(*r.wall_ms) : Json(nullptr);
    out["rows"].push_back(std::move(j));
  }
  os << out.dump(2) << '\n';
}

std::vector<ReportRow> read_json(std::istream& is) {
  Json in;
  try {
    in = Json::parse(is);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("bad JSON report: ") + e.what());
  }
  std::vector<ReportRow> rows;
  try {
    for (const auto& j : in.at("rows")) {
      ReportRow r;
      r.p = j.at("p").get<std::uint32_t>();
      r.nu = j.at("nu").get<std::uint32_t>();
      r.n = j.at("n").get<unsigned>();
      r.modulus = j.at("modulus").get<std::string>();
      r.residue = j.at("residue").get<std::string>();
      r.offset = j.at("offset").get<std::string>();
      r.stat = j.at("stat").get<std::string>();
      r.value = j.at("value").get<std::string>();
      r.predicted = j.at("predicted").get<std::string>();
      r.ratio = j.at("ratio").get<std::string>();
      r.flags = j.at("flags").get<std::vector<std::string>>();
      if (!j.at("wall_ms").is_null()) r.wall_ms = j.at("wall_ms").get<double>();
      rows.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("bad JSON report: ") + e.what());
  }
  return rows;
}

void write_report(std::ostream& os, std::span<const ReportRow> rows, Format format) {
  if (format == Format::Csv) {
    write_csv(os, rows);
  } else {
    write_json(os, rows);
  }
}

std::vector<ReportRow> read_report(std::istream& is, Format format) {
  return format == Format::Csv ? read_csv(is) : read_json(is);
}

}  // namespace fflab::lab
