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

#ifndef SDNLW_CLI_PARAMS_HPP
#define SDNLW_CLI_PARAMS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sdnlw::cli {

enum class OptionKind {
  value,
  /// Flag that stores "true" under the key.
  set_true,
  /// Flag that stores "false" under the key (e.g. --no-noise for noise).
  set_false,
};

/// One command-line option.  The flag is "--" + name; the config and
/// manifest key is `key` (defaults to name with '-' replaced by '_').
struct OptionSpec {
  std::string name;
  std::string help;
  std::optional<std::string> default_value;
  OptionKind kind = OptionKind::value;
  std::string key;

  std::string config_key() const;
};

/// Resolved string parameters with typed accessors.  Numbers accept decimal
/// and exponent notation; integers must be integral after parsing.
class Params {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  /// Throws ValidationError naming --key when absent.
  const std::string& str(const std::string& key) const;
  double real(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t count(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<int> int_list(const std::string& key) const;
  std::vector<std::string> str_list(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

double parse_real(const std::string& text, const std::string& what);
std::int64_t parse_integer(const std::string& text, const std::string& what);

/// Line-based config: "[section]" headers and "key = value" lines; '#' and
/// ';' start comments.  Keys outside any section and in [run] apply to
/// every subcommand; keys in [<subcommand>] apply to that one and win.
std::map<std::string, std::string> load_config(const std::string& path, const std::string& subcommand);

}  // namespace sdnlw::cli

#endif  // SDNLW_CLI_PARAMS_HPP
