// Copyright 2026 the opinion-game authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "opiniongame/errors.hpp"

namespace opiniongame {

using CsvValue = std::variant<double, long long, std::string>;

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<CsvValue>> rows;
};

// Fixed 12-significant-digit rendering so reruns are byte identical.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
  bool needs_quoting = s.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quoting) return s;
  std::string out = "\"";
  for (char ch : s) {
    out += ch;
    if (ch == '"') out += '"';
  }
  out += '"';
  return out;
}

inline std::string csv_cell(const CsvValue& value) {
  if (const double* d = std::get_if<double>(&value)) {
    if (!std::isfinite(*d)) {
      throw DataError("refusing to write non-finite value to CSV");
    }
    return format_double(*d);
  }
  if (const long long* i = std::get_if<long long>(&value)) {
    return std::to_string(*i);
  }
  return csv_quote(std::get<std::string>(value));
}

}  // namespace detail

// Writes header plus rows, comma separated, '\n' line ends, '.' decimals.
// Every row must match the header width and contain only finite numbers.
inline void emit_csv(const CsvTable& table,
                     const std::filesystem::path& path) {
  std::string body;
  for (size_t j = 0; j < table.columns.size(); ++j) {
    if (j) body += ',';
    body += detail::csv_quote(table.columns[j]);
  }
  body += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw DataError("CSV row width does not match header");
    }
    for (size_t j = 0; j < row.size(); ++j) {
      if (j) body += ',';
      body += detail::csv_cell(row[j]);
    }
    body += '\n';
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << body;
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace opiniongame
