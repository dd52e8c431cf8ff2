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

#include "sdnlw/cli/params.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "sdnlw/error.hpp"

namespace sdnlw::cli {

std::string OptionSpec::config_key() const {
  if (!key.empty()) return key;
  std::string k = name;
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

double parse_real(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("invalid number for " + what + ": '" + text + "'");
  }
  if (used != text.size()) throw ValidationError("invalid number for " + what + ": '" + text + "'");
  return v;
}

std::int64_t parse_integer(const std::string& text, const std::string& what) {
  const double v = parse_real(text, what);
  if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 9.0e15) {
    throw ValidationError("expected an integer for " + what + ": '" + text + "'");
  }
  return static_cast<std::int64_t>(v);
}

const std::string& Params::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    throw ValidationError("missing required option --" + flag);
  }
  return it->second;
}

double Params::real(const std::string& key) const { return parse_real(str(key), "--" + key); }

std::int64_t Params::integer(const std::string& key) const { return parse_integer(str(key), "--" + key); }

std::uint64_t Params::count(const std::string& key) const {
  const std::int64_t v = integer(key);
  if (v < 0) throw ValidationError("--" + key + " must be non-negative");
  return static_cast<std::uint64_t>(v);
}

bool Params::flag(const std::string& key) const {
  std::string v = str(key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError("expected a boolean for --" + key + ": '" + v + "'");
}

std::vector<std::string> Params::str_list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream in(str(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> Params::int_list(const std::string& key) const {
  std::vector<int> out;
  for (const auto& item : str_list(key)) {
    const std::int64_t v = parse_integer(item, "--" + key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      throw ValidationError("--" + key + " entry out of range: " + item);
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::map<std::string, std::string> load_config(const std::string& path, const std::string& subcommand) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError("cannot read config " + path + ": " + e.message());
  }
  std::map<std::string, std::string> out;
  auto take = [&](const boost::property_tree::ptree& section) {
    for (const auto& [k, v] : section) {
      if (v.empty()) out[k] = v.data();
    }
  };
  take(tree);
  if (const auto run = tree.get_child_optional("run")) take(*run);
  if (const auto own = tree.get_child_optional(subcommand)) take(*own);
  return out;
}

}  // namespace sdnlw::cli
