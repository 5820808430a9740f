// Copyright 2026 The fairgraph Authors.
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

#ifndef FAIRGRAPH_CSV_H_
#define FAIRGRAPH_CSV_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace fairgraph {

// A comma-separated file with a header row. Quoting is not supported; the
// formats this library reads and writes never need it.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // 1-based source line of each row, for error messages.
  std::vector<int> line_numbers;
};

absl::StatusOr<CsvTable> ReadCsv(const std::string& path);
absl::StatusOr<CsvTable> ParseCsv(absl::string_view content,
                                  absl::string_view source_name);

absl::StatusOr<double> ParseCsvDouble(absl::string_view field,
                                      absl::string_view source_name, int line);
absl::StatusOr<long long> ParseCsvInt(absl::string_view field,
                                      absl::string_view source_name, int line);

// Shortest decimal representation that parses back to the same double.
std::string FormatShortest(double value);

// Writes `content` to a sibling temp file and renames it over `path`.
absl::Status WriteFileAtomically(const std::string& path,
                                 absl::string_view content);

absl::StatusOr<std::string> ReadFile(const std::string& path);

}  // namespace fairgraph

#endif  // FAIRGRAPH_CSV_H_
