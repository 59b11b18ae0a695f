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

// Heralded signal state after an APD click on the trigger mode.
//
// The pre-detection state must be in the decoupled generic form
//
//   Gamma = [[a, 0, e, 0],      d = (0, 0, t, u)
//            [0, b, 0, f],
//            [e, 0, c, 0],
//            [0, f, 0, d]]
//
// for which the on/off projection has closed-form Gaussian components.

#include "cvqubit/gaussian_core.hpp"
#include "cvqubit/temporal_model.hpp"

namespace cvq {

struct ConditionalComponents {
  double signal_var_x = 1.0;   // a
  double signal_var_p = 1.0;   // b
  double trigger_var_x = 1.0;  // c
  double trigger_var_p = 1.0;  // d
  double cross_x = 0.0;        // e
  double cross_p = 0.0;        // f
  double trigger_disp_x = 0.0;  // t
  double trigger_disp_p = 0.0;  // u

  double conditioned_var_x = 1.0;  // a - e^2/(1+c)
  double conditioned_var_p = 1.0;  // b - f^2/(1+d)
  PhasePoint conditioned_center;   // (-e t/(1+c), -f u/(1+d))

  // Vacuum-projection weights 2/sqrt((1+c)(1+d)), undisplaced and displaced.
  double subtraction_weight = 1.0;
  double displaced_subtraction_weight = 1.0;
  double one_minus_weight = 0.0;            // 1 - w without cancellation
  double one_minus_displaced_weight = 0.0;  // 1 - w_d

  // The trigger mode is (numerically) vacuum: a click cannot herald anything.
  bool vacuum_trigger = true;
};

// Within this distance of 1 a subtraction weight counts as degenerate.
inline constexpr double kDegenerateWeightTol = 1e-9;

ConditionalComponents conditional_components(const GaussianState& state);

// Click from a dark count or an unmatched displacement photon.
SignedGaussianMixture wigner_sq(const GaussianState& state);

// Plain photon subtraction (displacement ignored).
SignedGaussianMixture wigner_1ps(const GaussianState& state);

// Displaced photon subtraction.
SignedGaussianMixture wigner_d1ps(const GaussianState& state_with_disp);

// Rate-weighted branch fractions of the output mixture.
struct BranchWeights {
  double displaced_subtraction = 0.0;  // chi (R_sq + R_disp) / R
  double plain_subtraction = 0.0;      // (1 - chi) R_sq / R
  double passthrough = 0.0;            // ((1 - chi) R_disp + R_dc) / R
};

BranchWeights branch_weights(const ExperimentParams& params);

// Mixes the three branches for an already displaced two-mode state.
SignedGaussianMixture output_state(const ExperimentParams& params,
                                   const GaussianState& state_with_disp);

// Full pipeline: covariance, displacement and conditioning.
SignedGaussianMixture output_state(const ExperimentParams& params);

}  // namespace cvq
