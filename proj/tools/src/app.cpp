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

#include "sdnlw/cli/app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include "commands.hpp"
#include "sdnlw/error.hpp"
#include "sdnlw/version.hpp"

namespace sdnlw::cli {
namespace {

struct Bound {
  const OptionSpec* spec;
  CLI::Option* option;
  std::string value;
};

std::map<std::string, std::string> manifest_params(const std::string& path, const std::string& subcommand) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest " + path);
  Json m;
  try {
    m = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError("malformed manifest " + path + ": " + e.what());
  }
  if (m.value("subcommand", std::string()) != subcommand) {
    throw ValidationError("manifest " + path + " was written by '" + m.value("subcommand", std::string()) + "'");
  }
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : m.at("params").items()) out[k] = v.get<std::string>();
  return out;
}

std::string default_out_dir() {
  const char* env = std::getenv("SDNLW_OUT_DIR");
  return env != nullptr && *env != '\0' ? env : "sdnlw_out";
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic damped nonlinear wave laboratory", "sdnlw"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  std::string config_path, manifest_path, out_dir;
  app.add_option("--config", config_path, "INI config file (top level, [run] and [<subcommand>] sections)");
  app.add_option("--manifest", manifest_path, "re-run with the parameters of an earlier manifest.json");
  app.add_option("--out", out_dir, "output directory (default: $SDNLW_OUT_DIR or sdnlw_out)");

  std::map<std::string, std::vector<std::unique_ptr<Bound>>> bound;
  std::map<std::string, const Command*> by_name;
  for (const auto& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    by_name[cmd.name] = &cmd;
    for (const auto& spec : cmd.options) {
      auto b = std::make_unique<Bound>();
      b->spec = &spec;
      std::string help = spec.help;
      if (spec.kind == OptionKind::value && spec.default_value) help += " [" + *spec.default_value + "]";
      if (spec.kind == OptionKind::value) {
        b->option = sub->add_option("--" + spec.name, b->value, help);
      } else {
        b->option = sub->add_flag("--" + spec.name)->description(help);
      }
      bound[cmd.name].push_back(std::move(b));
    }
  }

  std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1), argv.end());
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const Command& cmd = *by_name.at(sub->get_name());

  std::optional<OutputDir> dir;
  Json manifest;
  manifest["tool"] = "sdnlw";
  manifest["version"] = kVersion;
  manifest["subcommand"] = cmd.name;
  manifest["started"] = utc_now();
  int code = kExitOk;
  try {
    Params p;
    for (const auto& spec : cmd.options) {
      if (spec.default_value) p.set(spec.config_key(), *spec.default_value);
    }
    std::string config_out;
    if (!config_path.empty()) {
      for (const auto& [k, v] : load_config(config_path, cmd.name)) {
        if (k == "out_dir") {
          config_out = v;
          continue;
        }
        for (const auto& spec : cmd.options) {
          if (spec.config_key() == k) p.set(k, v);
        }
      }
    }
    if (!manifest_path.empty()) {
      for (const auto& [k, v] : manifest_params(manifest_path, cmd.name)) p.set(k, v);
    }
    for (const auto& b : bound.at(cmd.name)) {
      if (b->option->count() == 0) continue;
      switch (b->spec->kind) {
        case OptionKind::value:
          p.set(b->spec->config_key(), b->value);
          break;
        case OptionKind::set_true:
          p.set(b->spec->config_key(), "true");
          break;
        case OptionKind::set_false:
          p.set(b->spec->config_key(), "false");
          break;
      }
    }
    if (out_dir.empty()) out_dir = config_out.empty() ? default_out_dir() : config_out;
    dir.emplace(out_dir);

    Json params = Json::object();
    for (const auto& [k, v] : p.values()) {
      if (k != "threads") params[k] = v;
    }
    manifest["params"] = params;
    if (p.has("seed")) manifest["seed"] = p.count("seed");
    code = cmd.body(p, *dir, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    code = kExitValidation;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    code = kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    code = kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    code = kExitValidation;
  }
  if (dir) {
    manifest["finished"] = utc_now();
    manifest["exit_code"] = code;
    Json digests = Json::object();
    for (const auto& [name, d] : dir->digests()) digests[name] = d;
    manifest["outputs"] = digests;
    try {
      std::ofstream(dir->path() / "manifest.json") << manifest.dump(2) << "\n";
    } catch (const std::exception& e) {
      err << "cannot write manifest: " << e.what() << "\n";
    }
  }
  return code;
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr); }

}  // namespace sdnlw::cli
