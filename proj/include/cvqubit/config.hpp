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

// Run configuration: a versioned YAML document with the sections
// `experiment`, `analysis`, `sweep` and `tomography` plus a top-level `seed`.
// The key schema lives in docs/config_schema.md. Unknown keys are rejected.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cvqubit/temporal_model.hpp"

namespace cvq {

inline constexpr int kConfigSchemaVersion = 1;

struct AnalysisSettings {
  double qubit_r = 0.38;
  int map_theta_points = 181;
  int map_phi_points = 361;
  double grid_half_width = 6.0;
  int grid_points = 241;
};

struct SweepSettings {
  // R_disp / R_sq, ascending; +inf allowed as the last entry only.
  std::vector<double> ratios{0.0, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0,
                             std::numeric_limits<double>::infinity()};
  std::optional<double> phi_disp;  // experiment.phi_disp when unset
  int theta_points = 46;
  int phi_points = 91;
};

struct TomographySettings {
  int phases = 12;
  int samples_per_phase = 30000;
  int n_max = 10;
  int max_iters = 2000;
  double tol = 1e-10;
  int bootstrap_resamples = 20;
  int bootstrap_max_iters = 40;
  double ci_flag_width = 0.02;
};

struct RunConfig {
  ExperimentParams experiment;
  AnalysisSettings analysis;
  SweepSettings sweep;
  TomographySettings tomography;
  std::uint64_t seed = 1;
  std::string source = "<defaults>";

  // Sorted-key compact JSON of every resolved value.
  std::string canonical_json() const;
  // Lowercase hex SHA-256 of canonical_json().
  std::string hash() const;
};

// `key=value` pairs; keys are dotted paths such as `experiment.T_t`, values
// are parsed as YAML scalars or flow sequences.
using ParamOverrides = std::vector<std::string>;

RunConfig parse_config(const std::string& text, const std::string& source,
                       const ParamOverrides& overrides = {});
RunConfig load_config(const std::string& path,
                      const ParamOverrides& overrides = {});
RunConfig default_config(const ParamOverrides& overrides = {});

std::string sha256_hex(const std::string& bytes);

}  // namespace cvq
