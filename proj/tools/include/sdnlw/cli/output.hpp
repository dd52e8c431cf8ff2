// Copyright 2026 The sdnlw Authors.
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

#ifndef SDNLW_CLI_OUTPUT_HPP
#define SDNLW_CLI_OUTPUT_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdnlw/stats.hpp"

namespace sdnlw::cli {

using Json = nlohmann::ordered_json;

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Shortest round-trip decimal form ("%.17g" trimmed), used in CSV output.
std::string format_real(double x);

/// EstimatorReport as a JSON object.
Json report_json(const EstimatorReport& r);

/// Output directory of one run.  Every file goes through write(), which
/// records its digest for the manifest.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir);

  const std::filesystem::path& path() const { return dir_; }
  void write(const std::string& name, const std::string& bytes);
  void write_jsonl(const std::string& name, const std::vector<Json>& records);
  void write_csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows);
  const std::map<std::string, std::string>& digests() const { return digests_; }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> digests_;
};

/// ISO-8601 UTC timestamp of the current time.
std::string utc_now();

}  // namespace sdnlw::cli

#endif  // SDNLW_CLI_OUTPUT_HPP
