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

// Two-mode Gaussian state of the OPO signal and the tapped trigger beam,
// restricted to the temporal modes selected by the signal filter and the
// trigger click.

#include <optional>
#include <vector>

#include "cvqubit/gaussian_core.hpp"

namespace cvq {

// Angular frequencies are in rad/s, rates in counts/s.
struct ExperimentParams {
  double opo_bandwidth = 2.0 * kPi * 4.5e6;      // HWHM
  double pump_level = 0.3 * 2.0 * kPi * 4.5e6;   // below opo_bandwidth
  double filter_bandwidth = 2.0 * kPi * 25e6;    // trigger filter HWHM
  double tap_transmission = 0.95;
  double signal_efficiency = 0.82;
  double trigger_efficiency = 0.1;
  double squeezing_click_rate = 3600.0;
  // May be +infinity: the displacement beam dominates every click.
  double displacement_click_rate = 0.0;
  double dark_count_rate = 30.0;
  double displacement_angle = 0.0;  // radians
  double mode_matching = 0.97;

  // Signal mode function used when extracting homodyne data. Unset values
  // follow the physical parameters.
  std::optional<double> analysis_opo_bandwidth;
  std::optional<double> analysis_pump_level;  // accepted, not used by psi_A
  std::optional<double> analysis_filter_bandwidth;

  double analysis_gamma() const {
    return analysis_opo_bandwidth.value_or(opo_bandwidth);
  }
  double analysis_epsilon() const {
    return analysis_pump_level.value_or(pump_level);
  }
  double analysis_kappa() const {
    return analysis_filter_bandwidth.value_or(filter_bandwidth);
  }

  // R_disp / R_sq; +infinity when the displacement rate is infinite.
  double click_ratio() const;
  double total_click_rate() const;

  // Throws invalid-argument naming the offending configuration key.
  void validate() const;
};

enum class Quadrature { kX, kP };

// Normal-ordered OPO output correlation <:dq(t) dq(t+tau):>.
double opo_autocorrelation(Quadrature quad, double tau, double gamma,
                           double epsilon);

enum class HalfLine {
  kNegative,  // t <= 0
  kPositive,  // t > 0
};

// coeff * exp(-rate |t|) restricted to one half-line.
struct ExpTerm {
  double coeff = 0.0;
  double rate = 1.0;
  HalfLine side = HalfLine::kNegative;
};

class FilterFunction {
 public:
  FilterFunction() = default;
  explicit FilterFunction(std::vector<ExpTerm> terms)
      : terms_(std::move(terms)) {}

  const std::vector<ExpTerm>& terms() const { return terms_; }
  double operator()(double t) const;
  double norm_squared() const;

 private:
  std::vector<ExpTerm> terms_;
};

// int int f(t) g(t') exp(-decay |t - t'|) dt dt', closed form.
double correlation_integral(const FilterFunction& f, const FilterFunction& g,
                            double decay);

// Normalized signal mode psi_A and the trigger filter f_B.
FilterFunction signal_mode(double gamma_f, double kappa_f);
FilterFunction trigger_filter(double kappa, double trigger_efficiency);

double signal_mode_function(double t, double gamma_f, double kappa_f);
double trigger_filter_function(double t, double kappa,
                               double trigger_efficiency);

struct ModeFunctions {
  FilterFunction signal;   // sqrt(eta_A) psi_A
  FilterFunction trigger;  // f_B
};

ModeFunctions make_mode_functions(const ExperimentParams& params);

// Covariance of (x_A, p_A, x_B, p_B) with vacuum added back; zero mean.
GaussianState build_covariance(const ExperimentParams& params);

// Trigger photon number from squeezing, (:Gamma33: + :Gamma44:)/4.
double trigger_photon_number(const GaussianState& state);

// Adds the trigger-mode displacement fixed by R_disp / R_sq and the
// displacement angle. The rate ratio must be finite.
GaussianState displacement_vector(const ExperimentParams& params,
                                  const GaussianState& state);

}  // namespace cvq
