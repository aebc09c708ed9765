// Copyright 2026 The dpqc Authors
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

#ifndef DPQC_CSV_H_
#define DPQC_CSV_H_

#include <cstdint>
#include <string>
#include <vector>

namespace dpqc {

// Comma-separated table: '#' comment lines are skipped, the first remaining
// line is the header. Parse errors report 1-based line numbers.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int64_t> line_numbers;  // source line of each row

  int ColumnIndex(const std::string& name) const;  // -1 when absent
};

CsvTable ReadCsv(const std::string& path);

void WriteCsv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows,
              const std::string& comment = "");

// Integer parse with file/line context in the error message.
int64_t ParseIntField(const std::string& text, const std::string& context);

}  // namespace dpqc

#endif  // DPQC_CSV_H_
