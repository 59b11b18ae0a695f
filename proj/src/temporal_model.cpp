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

#include "cvqubit/temporal_model.hpp"

#include <cmath>
#include <limits>
#include <fmt/format.h>

#include "cvqubit/errors.hpp"

namespace cvq {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) fail(ErrorKind::kInvalidArgument, message);
}

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }
bool in_closed_unit(double v) { return v >= 0.0 && v <= 1.0; }

// Both exponentials on the same half-line, measured away from t = 0.
double same_side(double mu, double nu, double decay) {
  return (1.0 / (mu + nu)) * (1.0 / (mu + decay) + 1.0 / (nu + decay));
}

double opposite_side(double mu, double nu, double decay) {
  return 1.0 / ((mu + decay) * (nu + decay));
}

}  // namespace

double ExperimentParams::click_ratio() const {
  if (std::isinf(displacement_click_rate)) {
    return std::numeric_limits<double>::infinity();
  }
  if (squeezing_click_rate == 0.0) {
    if (displacement_click_rate == 0.0) return 0.0;
    fail(ErrorKind::kUndefinedRatio,
         "R_disp / R_sq undefined with R_sq = 0 and R_disp > 0");
  }
  return displacement_click_rate / squeezing_click_rate;
}

double ExperimentParams::total_click_rate() const {
  return squeezing_click_rate + displacement_click_rate + dark_count_rate;
}

void ExperimentParams::validate() const {
  require(opo_bandwidth > 0.0 && std::isfinite(opo_bandwidth),
          fmt::format("gamma = {} must be positive", opo_bandwidth));
  require(pump_level >= 0.0,
          fmt::format("epsilon = {} must be non-negative", pump_level));
  if (!(pump_level < opo_bandwidth)) {
    fail(ErrorKind::kAboveThreshold,
         fmt::format("epsilon = {} must stay below gamma = {}", pump_level,
                     opo_bandwidth));
  }
  require(filter_bandwidth > 0.0 && std::isfinite(filter_bandwidth),
          fmt::format("kappa = {} must be positive", filter_bandwidth));
  require(in_open_unit(tap_transmission),
          fmt::format("T_t = {} outside (0, 1)", tap_transmission));
  require(in_closed_unit(signal_efficiency),
          fmt::format("eta_A = {} outside [0, 1]", signal_efficiency));
  require(in_closed_unit(trigger_efficiency),
          fmt::format("eta_B = {} outside [0, 1]", trigger_efficiency));
  require(squeezing_click_rate >= 0.0 && std::isfinite(squeezing_click_rate),
          fmt::format("R_sq = {} must be finite and >= 0",
                      squeezing_click_rate));
  require(displacement_click_rate >= 0.0,
          fmt::format("R_disp = {} must be >= 0", displacement_click_rate));
  require(dark_count_rate >= 0.0 && std::isfinite(dark_count_rate),
          fmt::format("R_dc = {} must be finite and >= 0", dark_count_rate));
  if (!(total_click_rate() > 0.0)) {
    fail(ErrorKind::kNoClick, "R_sq + R_disp + R_dc must be positive");
  }
  require(std::isfinite(displacement_angle),
          fmt::format("phi_disp = {} must be finite", displacement_angle));
  require(in_closed_unit(mode_matching),
          fmt::format("chi = {} outside [0, 1]", mode_matching));
  require(analysis_gamma() > 0.0,
          fmt::format("gamma_f = {} must be positive", analysis_gamma()));
  require(analysis_kappa() > 0.0,
          fmt::format("kappa_f = {} must be positive", analysis_kappa()));
  require(analysis_epsilon() >= 0.0,
          fmt::format("epsilon_f = {} must be non-negative",
                      analysis_epsilon()));
}

double opo_autocorrelation(Quadrature quad, double tau, double gamma,
                           double epsilon) {
  if (epsilon < 0.0) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("pump level {} is negative", epsilon));
  }
  if (!(epsilon < gamma)) {
    fail(ErrorKind::kAboveThreshold,
         fmt::format("pump level {} at or above threshold {}", epsilon, gamma));
  }
  const double at = std::abs(tau);
  if (quad == Quadrature::kX) {
    return gamma * epsilon / (gamma - epsilon) *
           std::exp(-(gamma - epsilon) * at);
  }
  return -gamma * epsilon / (gamma + epsilon) *
         std::exp(-(gamma + epsilon) * at);
}

double FilterFunction::operator()(double t) const {
  double value = 0.0;
  for (const auto& term : terms_) {
    const bool on_side =
        term.side == HalfLine::kNegative ? t <= 0.0 : t > 0.0;
    if (on_side) value += term.coeff * std::exp(-term.rate * std::abs(t));
  }
  return value;
}

double FilterFunction::norm_squared() const {
  double total = 0.0;
  for (const auto& a : terms_) {
    for (const auto& b : terms_) {
      if (a.side == b.side) total += a.coeff * b.coeff / (a.rate + b.rate);
    }
  }
  return total;
}

double correlation_integral(const FilterFunction& f, const FilterFunction& g,
                            double decay) {
  if (!(decay > 0.0)) {
    fail(ErrorKind::kInvalidArgument, "correlation decay must be positive");
  }
  double total = 0.0;
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) {
      const double kernel = a.side == b.side
                                ? same_side(a.rate, b.rate, decay)
                                : opposite_side(a.rate, b.rate, decay);
      total += a.coeff * b.coeff * kernel;
    }
  }
  return total;
}

FilterFunction signal_mode(double gamma_f, double kappa_f) {
  if (!(gamma_f > 0.0) || !(kappa_f > 0.0)) {
    fail(ErrorKind::kInvalidArgument, "mode bandwidths must be positive");
  }
  if (gamma_f == kappa_f) {
    fail(ErrorKind::kDegenerateMode,
         fmt::format("gamma_f = kappa_f = {} makes psi_A vanish", gamma_f));
  }
  const double g = gamma_f;
  const double k = kappa_f;
  const double norm = g * g * g * k * k * k * (g + k) /
                      (g * g * g * g + g * g * g * k - 4.0 * g * g * k * k +
                       g * k * k * k + k * k * k * k);
  const double s = std::sqrt(norm);
  return FilterFunction({
      {s / g, g, HalfLine::kNegative},
      {s / g, g, HalfLine::kPositive},
      {-s / k, k, HalfLine::kNegative},
      {-s / k, k, HalfLine::kPositive},
  });
}

FilterFunction trigger_filter(double kappa, double trigger_efficiency) {
  if (!(kappa > 0.0)) {
    fail(ErrorKind::kInvalidArgument, "trigger filter bandwidth must be > 0");
  }
  return FilterFunction(
      {{std::sqrt(2.0 * kappa * trigger_efficiency), kappa,
        HalfLine::kNegative}});
}

double signal_mode_function(double t, double gamma_f, double kappa_f) {
  return signal_mode(gamma_f, kappa_f)(t);
}

double trigger_filter_function(double t, double kappa,
                               double trigger_efficiency) {
  return trigger_filter(kappa, trigger_efficiency)(t);
}

ModeFunctions make_mode_functions(const ExperimentParams& params) {
  auto psi = signal_mode(params.analysis_gamma(), params.analysis_kappa());
  std::vector<ExpTerm> scaled = psi.terms();
  const double amp = std::sqrt(params.signal_efficiency);
  for (auto& term : scaled) term.coeff *= amp;
  return {FilterFunction(std::move(scaled)),
          trigger_filter(params.filter_bandwidth, params.trigger_efficiency)};
}

GaussianState build_covariance(const ExperimentParams& params) {
  params.validate();
  const double gamma = params.opo_bandwidth;
  const double eps = params.pump_level;
  const auto modes = make_mode_functions(params);

  // Equal-time prefactors of :Gamma_OPO,11: and :Gamma_OPO,22:; the factor 2
  // converts correlations into covariance-matrix entries.
  const double x_amp = 2.0 * opo_autocorrelation(Quadrature::kX, 0.0, gamma, eps);
  const double p_amp = 2.0 * opo_autocorrelation(Quadrature::kP, 0.0, gamma, eps);
  const double x_decay = gamma - eps;
  const double p_decay = gamma + eps;

  const double t = params.tap_transmission;
  const double sig = t;
  const double trig = 1.0 - t;
  const double cross = -std::sqrt(t * (1.0 - t));

  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(4, 4);
  cov(0, 0) += sig * x_amp * correlation_integral(modes.signal, modes.signal, x_decay);
  cov(1, 1) += sig * p_amp * correlation_integral(modes.signal, modes.signal, p_decay);
  cov(2, 2) += trig * x_amp * correlation_integral(modes.trigger, modes.trigger, x_decay);
  cov(3, 3) += trig * p_amp * correlation_integral(modes.trigger, modes.trigger, p_decay);
  cov(0, 2) = cov(2, 0) =
      cross * x_amp * correlation_integral(modes.signal, modes.trigger, x_decay);
  cov(1, 3) = cov(3, 1) =
      cross * p_amp * correlation_integral(modes.signal, modes.trigger, p_decay);

  if (!cov.allFinite()) {
    fail(ErrorKind::kNumerical,
         fmt::format("non-finite covariance for gamma={} epsilon={} kappa={}",
                     gamma, eps, params.filter_bandwidth));
  }
  return GaussianState(std::move(cov), Eigen::VectorXd::Zero(4));
}

double trigger_photon_number(const GaussianState& state) {
  if (state.n_modes() != 2) {
    fail(ErrorKind::kInvalidArgument, "expected a two-mode state");
  }
  const double n =
      ((state.cov()(2, 2) - 1.0) + (state.cov()(3, 3) - 1.0)) / 4.0;
  if (n < -1e-9) {
    fail(ErrorKind::kInconsistentState,
         fmt::format("negative trigger photon number {}", n));
  }
  return std::max(n, 0.0);
}

GaussianState displacement_vector(const ExperimentParams& params,
                                  const GaussianState& state) {
  const double ratio = params.click_ratio();
  if (std::isinf(ratio)) {
    fail(ErrorKind::kInvalidArgument,
         "infinite click ratio has no finite displacement vector");
  }
  const double n_sq = trigger_photon_number(state);
  const double amp = std::sqrt(ratio * 2.0 * n_sq);
  Eigen::VectorXd disp = Eigen::VectorXd::Zero(4);
  disp(2) = amp * std::cos(params.displacement_angle);
  disp(3) = amp * std::sin(params.displacement_angle);
  return state.with_displacement(std::move(disp));
}

}  // namespace cvq
