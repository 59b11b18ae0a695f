// Copyright 2026 The cvqubit Authors
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

#include <CLI11.hpp>

#include <fmt/format.h>
#include <iostream>

#include "cvqubit/commands.hpp"
#include "cvqubit/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::vector<std::string> params;
};

CLI::App* add_command(CLI::App& app, const char* name, const char* help,
                      Flags& flags) {
  auto* sub = app.add_subcommand(name, help);
  sub->add_option("--config", flags.config, "YAML configuration file")
      ->check(CLI::ExistingFile);
  sub->add_option("--out", flags.out,
                  fmt::format("output directory (default ${} or ./{})",
                              cvq::kOutDirEnv, cvq::kDefaultOutDir));
  sub->add_option("--seed", flags.seed, "random seed (overrides the config)");
  sub->add_option("--params", flags.params,
                  "override config values, e.g. experiment.R_disp=3600")
      ->type_name("KEY=VALUE")
      ->expected(1, -1);
  return sub;
}

cvq::CommandOptions to_options(const CLI::App& sub, const Flags& flags) {
  cvq::CommandOptions options;
  if (sub.count("--config")) options.config_path = flags.config;
  if (sub.count("--out")) options.out_dir = flags.out;
  if (sub.count("--seed")) options.seed = flags.seed;
  options.overrides = flags.params;
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Displaced photon subtraction qubit simulator"};
  app.set_version_flag("--version", cvq::tool_version());
  app.require_subcommand(1);

  Flags flags;
  auto* state = add_command(app, "state", "heralded state, Wigner grid and Bloch map", flags);
  auto* sweep = add_command(app, "sweep", "click-ratio sweep of the qubit angle", flags);
  auto* tomo = add_command(app, "tomography",
                           "simulated homodyne data and maximum-likelihood reconstruction",
                           flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    std::string manifest;
    if (state->parsed()) {
      manifest = cvq::cmd_state(to_options(*state, flags));
    } else if (sweep->parsed()) {
      manifest = cvq::cmd_sweep(to_options(*sweep, flags));
    } else {
      manifest = cvq::cmd_tomography(to_options(*tomo, flags));
    }
    std::cout << manifest << '\n';
    return 0;
  } catch (const cvq::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case cvq::ErrorKind::kConfig:
      case cvq::ErrorKind::kInvalidArgument:
      case cvq::ErrorKind::kAboveThreshold:
      case cvq::ErrorKind::kNoClick:
      case cvq::ErrorKind::kUndefinedRatio:
      case cvq::ErrorKind::kDegenerateMode:
        return kExitConfig;
      default:
        return kExitNumerical;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
