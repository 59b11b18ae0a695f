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

#include "cvqubit/conditioning.hpp"

#include <cmath>
#include <fmt/format.h>

#include "cvqubit/errors.hpp"

namespace cvq {
namespace {

constexpr double kGenericFormTol = 1e-10;

void require_generic_form(const GaussianState& state) {
  if (state.n_modes() != 2) {
    fail(ErrorKind::kNotGenericForm,
         fmt::format("expected a two-mode state, got {} modes",
                     state.n_modes()));
  }
  const auto& g = state.cov();
  const double coupling = std::max({std::abs(g(0, 1)), std::abs(g(0, 3)),
                                    std::abs(g(1, 2)), std::abs(g(2, 3))});
  if (coupling > kGenericFormTol) {
    fail(ErrorKind::kNotGenericForm,
         fmt::format("x/p blocks are coupled (max off-block entry {:.3g})",
                     coupling));
  }
  const auto& d = state.disp();
  if (std::abs(d(0)) > kGenericFormTol || std::abs(d(1)) > kGenericFormTol) {
    fail(ErrorKind::kNotGenericForm,
         fmt::format("signal mode is displaced by ({}, {})", d(0), d(1)));
  }
}

GaussianComponent squeezed_component(const ConditionalComponents& cc,
                                     double weight) {
  return {weight, {0.0, 0.0}, cc.signal_var_x, cc.signal_var_p};
}

GaussianComponent conditioned_component(const ConditionalComponents& cc,
                                        double weight, PhasePoint center) {
  if (!(cc.conditioned_var_x > 0.0) || !(cc.conditioned_var_p > 0.0)) {
    fail(ErrorKind::kInconsistentState,
         fmt::format("conditioned variances ({}, {}) not positive",
                     cc.conditioned_var_x, cc.conditioned_var_p));
  }
  return {weight, center, cc.conditioned_var_x, cc.conditioned_var_p};
}

}  // namespace

ConditionalComponents conditional_components(const GaussianState& state) {
  require_generic_form(state);
  const auto& g = state.cov();
  ConditionalComponents cc;
  cc.signal_var_x = g(0, 0);
  cc.signal_var_p = g(1, 1);
  cc.trigger_var_x = g(2, 2);
  cc.trigger_var_p = g(3, 3);
  cc.cross_x = g(0, 2);
  cc.cross_p = g(1, 3);
  cc.trigger_disp_x = state.disp()(2);
  cc.trigger_disp_p = state.disp()(3);

  const double one_c = 1.0 + cc.trigger_var_x;
  const double one_d = 1.0 + cc.trigger_var_p;
  cc.conditioned_var_x = cc.signal_var_x - cc.cross_x * cc.cross_x / one_c;
  cc.conditioned_var_p = cc.signal_var_p - cc.cross_p * cc.cross_p / one_d;
  cc.conditioned_center = {-cc.cross_x * cc.trigger_disp_x / one_c,
                           -cc.cross_p * cc.trigger_disp_p / one_d};
  // 1 - w from log w via expm1.
  const double log_w =
      -0.5 * (std::log1p(0.5 * (cc.trigger_var_x - 1.0)) +
              std::log1p(0.5 * (cc.trigger_var_p - 1.0)));
  const double log_wd =
      log_w - cc.trigger_disp_x * cc.trigger_disp_x / one_c -
      cc.trigger_disp_p * cc.trigger_disp_p / one_d;
  cc.subtraction_weight = std::exp(log_w);
  cc.displaced_subtraction_weight = std::exp(log_wd);
  cc.one_minus_weight = -std::expm1(log_w);
  cc.one_minus_displaced_weight = -std::expm1(log_wd);
  cc.vacuum_trigger = cc.one_minus_weight <= kDegenerateWeightTol;
  return cc;
}

SignedGaussianMixture wigner_sq(const GaussianState& state) {
  const auto cc = conditional_components(state);
  return SignedGaussianMixture({squeezed_component(cc, 1.0)});
}

SignedGaussianMixture wigner_1ps(const GaussianState& state) {
  const auto cc = conditional_components(state);
  const double w = cc.subtraction_weight;
  const double gap = cc.one_minus_weight;
  if (gap <= kDegenerateWeightTol) {
    fail(ErrorKind::kVacuumTrigger,
         fmt::format("subtraction weight w = {} leaves nothing to herald", w));
  }
  return SignedGaussianMixture(
      {squeezed_component(cc, 1.0 / gap),
       conditioned_component(cc, -w / gap, {0.0, 0.0})});
}

SignedGaussianMixture wigner_d1ps(const GaussianState& state_with_disp) {
  const auto cc = conditional_components(state_with_disp);
  const double wd = cc.displaced_subtraction_weight;
  const double gap = cc.one_minus_displaced_weight;
  if (gap <= kDegenerateWeightTol) {
    fail(ErrorKind::kVacuumTrigger,
         fmt::format("displaced subtraction weight w_d = {} is degenerate",
                     wd));
  }
  return SignedGaussianMixture(
      {squeezed_component(cc, 1.0 / gap),
       conditioned_component(cc, -wd / gap, cc.conditioned_center)});
}

BranchWeights branch_weights(const ExperimentParams& params) {
  const double chi = params.mode_matching;
  if (std::isinf(params.displacement_click_rate)) {
    return {chi, 0.0, 1.0 - chi};
  }
  const double total = params.total_click_rate();
  if (!(total > 0.0)) {
    fail(ErrorKind::kNoClick, "total click rate is zero");
  }
  const double sq = params.squeezing_click_rate;
  const double disp = params.displacement_click_rate;
  return {chi * (sq + disp) / total, (1.0 - chi) * sq / total,
          ((1.0 - chi) * disp + params.dark_count_rate) / total};
}

SignedGaussianMixture output_state(const ExperimentParams& params,
                                   const GaussianState& state_with_disp) {
  const auto weights = branch_weights(params);
  if (std::isinf(params.displacement_click_rate)) {
    // w_d -> 0: every branch reduces to the passthrough squeezed vacuum.
    return wigner_sq(state_with_disp);
  }
  std::vector<std::pair<double, SignedGaussianMixture>> terms;
  if (weights.displaced_subtraction != 0.0) {
    terms.emplace_back(weights.displaced_subtraction,
                       wigner_d1ps(state_with_disp));
  }
  if (weights.plain_subtraction != 0.0) {
    terms.emplace_back(weights.plain_subtraction, wigner_1ps(state_with_disp));
  }
  if (weights.passthrough != 0.0) {
    terms.emplace_back(weights.passthrough, wigner_sq(state_with_disp));
  }
  auto out = SignedGaussianMixture::combine(terms);
  // Tolerance relative to the summed |weights|.
  double magnitude = 0.0;
  for (const auto& c : out.components()) magnitude += std::abs(c.weight);
  if (std::abs(out.total_weight() - 1.0) > 1e-12 * std::max(1.0, magnitude)) {
    fail(ErrorKind::kNumerical,
         fmt::format("output state weight {} is not normalized",
                     out.total_weight()));
  }
  return out;
}

SignedGaussianMixture output_state(const ExperimentParams& params) {
  const auto cov = build_covariance(params);
  if (std::isinf(params.displacement_click_rate)) {
    return output_state(params, cov);
  }
  return output_state(params, displacement_vector(params, cov));
}

}  // namespace cvq
