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

#pragma once

// Front-end operations behind the `state`, `sweep` and `tomography`
// subcommands. Each command writes its files into an output directory and
// finishes with manifest.json, whose path it returns.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cvqubit/conditioning.hpp"
#include "cvqubit/config.hpp"
#include "cvqubit/gaussian_core.hpp"
#include "cvqubit/squeezed_qubit.hpp"
#include "cvqubit/tomography.hpp"

namespace cvq {

inline constexpr const char* kOutDirEnv = "CVQUBIT_OUT_DIR";
inline constexpr const char* kDefaultOutDir = "cvqubit_out";

struct CommandOptions {
  std::optional<std::string> config_path;  // built-in defaults when unset
  std::optional<std::string> out_dir;      // $CVQUBIT_OUT_DIR, then ./cvqubit_out
  std::optional<std::uint64_t> seed;       // overrides the config seed
  ParamOverrides overrides;
};

const char* tool_version();

RunConfig resolve_config(const CommandOptions& options);
std::string resolve_out_dir(const std::optional<std::string>& flag);

struct StateSummary {
  double theta_star = 0.0;  // radians
  double phi_star = 0.0;
  double f_star = 0.0;
  double w_origin = 0.0;
  double w_min = 0.0;
  double purity = 0.0;
  double integral = 0.0;  // grid check of the normalization
  double click_ratio = 0.0;
  BranchWeights weights;
};

struct StateResult {
  SignedGaussianMixture state;
  WignerGrid wigner;
  BlochMap map;
  StateSummary summary;
};

StateResult analyze_state(const RunConfig& config);

struct SweepRow {
  double ratio = 0.0;
  double theta_ideal = 0.0;  // radians
  double theta_model = 0.0;
  double fidelity_at_target = 0.0;
  double fidelity_max = 0.0;
};

// One point of the ratio ladder: R_disp = ratio * R_sq on top of `base`.
SweepRow sweep_point(const ExperimentParams& base, double ratio,
                     double phi_disp, double qubit_r, int n_theta, int n_phi);
std::vector<SweepRow> run_sweep(const RunConfig& config);

struct TomographyResult {
  QuadratureDataset dataset;
  MleResult mle;
  Eigen::MatrixXcd model_rho;  // normalized grid projection of the model
  double model_trace = 0.0;    // weight of the model below n_max
  double fidelity = 0.0;
  std::vector<double> bootstrap_fidelities;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool high_uncertainty = false;
};

TomographyResult run_tomography(const RunConfig& config);

std::string cmd_state(const CommandOptions& options);
std::string cmd_sweep(const CommandOptions& options);
std::string cmd_tomography(const CommandOptions& options);

}  // namespace cvq
