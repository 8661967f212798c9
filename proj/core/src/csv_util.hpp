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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cfloc::detail {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row
};

/// Shortest decimal text that round-trips to the same double.
std::string fmt_real(double v);

std::vector<std::string> split_csv_line(std::string_view line);

/// Reads a simple comma-separated file (no quoting). The header must equal
/// `expected_header` exactly and each row must have the same arity.
CsvTable read_csv(std::istream& in, const std::vector<std::string>& expected_header);

double parse_real(const std::string& field, std::size_t line);
long parse_long(const std::string& field, std::size_t line);
bool parse_bool(const std::string& field, std::size_t line);

}  // namespace cfloc::detail
