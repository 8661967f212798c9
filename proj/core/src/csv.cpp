// Copyright 2026 The cfloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <cmath>
#include <istream>

#include <fmt/format.h>

#include "cfloc/errors.hpp"
#include "csv_util.hpp"

namespace cfloc::detail {

std::string fmt_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

CsvTable read_csv(std::istream& in, const std::vector<std::string>& expected_header) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      if (fields != expected_header) throw ParseError("unexpected CSV header '" + line + "'", lineno);
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw ParseError("expected " + std::to_string(t.header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       lineno);
    }
    t.rows.push_back(std::move(fields));
    t.lines.push_back(lineno);
  }
  if (!have_header) throw ParseError("missing CSV header", lineno);
  return t;
}

double parse_real(const std::string& field, std::size_t line) {
  if (field == "nan") return std::nan("");
  if (field == "inf") return INFINITY;
  if (field == "-inf") return -INFINITY;
  try {
    std::size_t pos = 0;
    const double d = std::stod(field, &pos);
    if (pos != field.size()) throw ParseError("malformed number '" + field + "'", line);
    return d;
  } catch (const std::logic_error&) {
    throw ParseError("malformed number '" + field + "'", line);
  }
}

long parse_long(const std::string& field, std::size_t line) {
  long out = 0;
  const char* end = field.data() + field.size();
  auto [p, ec] = std::from_chars(field.data(), end, out);
  if (ec != std::errc() || p != end || field.empty()) throw ParseError("malformed integer '" + field + "'", line);
  return out;
}

bool parse_bool(const std::string& field, std::size_t line) {
  if (field == "1" || field == "true") return true;
  if (field == "0" || field == "false") return false;
  throw ParseError("malformed boolean '" + field + "'", line);
}

}  // namespace cfloc::detail
