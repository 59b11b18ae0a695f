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

// Ideal squeezed-qubit targets cos(theta/2) S(r)|0> + e^{i phi} sin(theta/2)
// S(r)|1>, with squeezing along p (x anti-squeezed), and the cat states they
// are compared with.

#include <Eigen/Dense>

#include <vector>

#include "cvqubit/gaussian_core.hpp"
#include "cvqubit/phase_space.hpp"

namespace cvq {

struct SqueezedQubitParams {
  double r = 0.38;
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [-pi, pi)

  void validate() const;
};

enum class CatParity { kEven, kOdd };

// Normalized |alpha> +- |-alpha> with real alpha > 0.
struct CatStateParams {
  double alpha = 1.0;
  CatParity parity = CatParity::kEven;
};

PhaseSpaceFunction squeezed_qubit_wigner(const SqueezedQubitParams& params);
PhaseSpaceFunction cat_wigner(const CatStateParams& cat);

// 2 pi int W_target W_state for a pure target. Values within 1e-9 of [0, 1]
// are clamped; anything beyond 1e-6 outside is a numerical error.
double pure_state_fidelity(const PhaseSpaceFunction& pure_target,
                           const PhaseSpaceFunction& state);

double fidelity(const SqueezedQubitParams& target,
                const SignedGaussianMixture& state);

double cat_fidelity(const SignedGaussianMixture& state,
                    const CatStateParams& cat);

// The fidelity against every squeezed qubit of fixed r is
//
//   F(theta, phi) = base + polar cos(theta)
//                   + sin(theta) (along_x cos(phi) + along_p sin(phi)),
//
// so four overlaps determine the whole Bloch-sphere map.
struct BlochProjection {
  double r = 0.38;
  double base = 0.0;
  double polar = 0.0;
  double along_x = 0.0;
  double along_p = 0.0;

  double fidelity(double theta, double phi) const;
};

BlochProjection bloch_projection(const PhaseSpaceFunction& state, double r);
BlochProjection bloch_projection(const SignedGaussianMixture& state, double r);

struct BlochMap {
  std::vector<double> theta;  // radians, [0, pi] inclusive
  std::vector<double> phi;    // radians, [-pi, pi] inclusive
  std::vector<double> values;  // row-major, theta index outer
  double theta_star = 0.0;
  double phi_star = 0.0;
  double f_star = 0.0;

  double at(std::size_t i, std::size_t j) const {
    return values[i * phi.size() + j];
  }
};

// Fidelity on a uniform grid; the best cell is refined with a 3x3 quadratic
// fit. Ties go to smaller theta, then smaller |phi|.
BlochMap bloch_fidelity_map(const BlochProjection& projection, int n_theta,
                            int n_phi);
BlochMap bloch_fidelity_map(const SignedGaussianMixture& state, double r,
                            int n_theta, int n_phi);

// theta = 2 atan(ratio^-1/2) for the lossless model; ratio may be +inf.
double ideal_theta_from_rates(double ratio);

// Qubit phase produced by a trigger displacement at angle phi_disp, wrapped to
// [-pi, pi). With the tapping beam splitter convention used here the negative
// Wigner dip sits at the reflection of the displacement, giving
// phi = pi - phi_disp.
double qubit_phase_from_displacement(double phi_disp);

// Wraps an angle into [-pi, pi).
double wrap_angle(double angle);

// Fock amplitudes of S(r)|0> and S(r)|1> for n = 0..n_max.
Eigen::VectorXd squeezed_vacuum_amplitudes(double r, int n_max);
Eigen::VectorXd squeezed_photon_amplitudes(double r, int n_max);

Eigen::VectorXcd squeezed_qubit_ket(const SqueezedQubitParams& params,
                                    int n_max);

}  // namespace cvq
