#include "mtd/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "mtd/error.hpp"

namespace mtd {
namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
      current += c;
    } else if (c == ',' && !quoted) {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(trim(current));
  return fields;
}

bool is_missing(const std::string& s) {
  return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan" || s == "null" || s == "NULL";
}

bool parse_double(const std::string& s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

struct Cell {
  std::string value;
  std::size_t line;  // 1-based line in the file
};

}  // namespace

std::vector<std::string> read_series_column(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() && line.find(',') == std::string::npos) {
      // Blank lines are missing values only inside single-column data.
      rows.push_back({""});
    } else {
      rows.push_back(split_row(line));
    }
    lines.push_back(number);
  }
  while (!rows.empty() && rows.back().size() == 1 && rows.back()[0].empty()) {
    rows.pop_back();
    lines.pop_back();
  }
  if (rows.empty()) throw Error("'" + path + "' is empty");

  // Resolve the column and the header.
  std::size_t column = 0;
  bool header = options.header == HeaderMode::kYes;
  const auto& first = rows.front();
  if (options.column) {
    auto it = std::find(first.begin(), first.end(), *options.column);
    if (it != first.end() && options.header != HeaderMode::kNo) {
      column = static_cast<std::size_t>(it - first.begin());
      header = true;
    } else if (all_digits(*options.column)) {
      column = std::stoul(*options.column);
    } else {
      throw Error("column '" + *options.column + "' not found in '" + path + "'");
    }
  }
  if (options.header == HeaderMode::kAuto && !header && column < first.size()) {
    const std::string& head = first[column];
    double v = 0.0;
    if (head == "x") {
      header = true;
    } else if (!parse_double(head, v) && !is_missing(head) && rows.size() > 1) {
      bool rest_numeric = true;
      for (std::size_t r = 1; r < rows.size() && rest_numeric; ++r) {
        const std::string cell = column < rows[r].size() ? rows[r][column] : "";
        rest_numeric = is_missing(cell) || parse_double(cell, v);
      }
      header = rest_numeric;
      // Multi-column files: a first entry that never recurs names the column.
      if (!header && first.size() > 1) {
        bool recurs = false;
        for (std::size_t r = 1; r < rows.size() && !recurs; ++r) {
          recurs = column < rows[r].size() && rows[r][column] == head;
        }
        header = !recurs;
      }
    }
  }

  std::vector<Cell> cells;
  for (std::size_t r = header ? 1 : 0; r < rows.size(); ++r) {
    if (column >= rows[r].size()) {
      throw Error("line " + std::to_string(lines[r]) + " has no column " + std::to_string(column));
    }
    cells.push_back({rows[r][column], lines[r]});
  }
  if (options.na_policy == NaPolicy::kDropEdges) {
    while (!cells.empty() && is_missing(cells.back().value)) cells.pop_back();
    auto first_present = std::find_if(cells.begin(), cells.end(), [](const Cell& c) { return !is_missing(c.value); });
    cells.erase(cells.begin(), first_present);
  }
  for (const auto& c : cells) {
    if (is_missing(c.value)) throw Error("missing value at line " + std::to_string(c.line) + " of '" + path + "'");
  }
  if (cells.empty()) throw Error("'" + path + "' holds no observations");

  std::vector<std::string> out;
  out.reserve(cells.size());
  for (auto& c : cells) out.push_back(std::move(c.value));
  if (options.reverse) std::reverse(out.begin(), out.end());
  return out;
}

Sample ingest_series(const std::string& path, const IngestOptions& options) {
  const auto raw = read_series_column(path, options);
  return ingest_series(path, Alphabet::infer(raw), options);
}

Sample ingest_series(const std::string& path, const Alphabet& alphabet, const IngestOptions& options) {
  const auto raw = read_series_column(path, options);
  std::vector<Symbol> values;
  values.reserve(raw.size());
  for (const auto& label : raw) values.push_back(alphabet.index(label));
  return Sample(alphabet, std::move(values));
}

std::vector<double> read_numeric_series(const std::string& path, const IngestOptions& options) {
  const auto raw = read_series_column(path, options);
  std::vector<double> out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    double v = 0.0;
    if (!parse_double(raw[i], v)) throw Error("non-numeric value '" + raw[i] + "' in '" + path + "'");
    out.push_back(v);
  }
  return out;
}

Discretization discretize(std::span<const double> series, int k) {
  if (k < 2) throw Error("need at least two bins");
  if (series.empty()) throw Error("empty series");
  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) throw Error("cannot discretize a constant series");
  Discretization out;
  out.edges.resize(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i < k; ++i) out.edges[static_cast<std::size_t>(i)] = lo + i * (hi - lo) / k;
  out.edges.back() = hi;
  std::vector<Symbol> values;
  values.reserve(series.size());
  for (double v : series) {
    // Number of interior boundaries <= v.
    Symbol bin = 0;
    while (bin + 1 < static_cast<Symbol>(k) && v >= out.edges[bin + 1]) ++bin;
    values.push_back(bin);
  }
  out.sample = Sample(Alphabet::numbered(static_cast<std::size_t>(k), 1), std::move(values));
  return out;
}

}  // namespace mtd
