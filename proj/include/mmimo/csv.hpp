// Copyright 2026 The mmimo Authors
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

#ifndef MMIMO_CSV_HPP_
#define MMIMO_CSV_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace mmimo {

/// Version written into the first line of every CSV file.
constexpr const char* kToolkitVersion = "0.1.0";

/// Comma-delimited table. The file starts with a comment line
///   # mmimo <version> experiment=<name>
/// followed by the header row.
struct CsvTable {
  std::string experiment;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Throws std::invalid_argument if the width differs from the header.
  void add_row(std::vector<std::string> row);
};

/// Shortest round-tripping decimal for a double; "nan" and "inf" as such.
std::string csv_number(double value);
std::string csv_number(long value);
std::string csv_number(int value);

void write_csv(std::ostream& out, const CsvTable& table);
/// Creates parent directories as needed.
void write_csv(const std::string& path, const CsvTable& table);

}  // namespace mmimo

#endif  // MMIMO_CSV_HPP_
