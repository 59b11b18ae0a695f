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

// Closed-form phase-space functions built from separable complex Gaussian
// terms
//
//   Re[ c * x^m exp(-ax x^2 + bx x) * p^n exp(-ap p^2 + bp p) ].
//
// Gaussian mixtures, the squeezed-qubit Wigner function (Gaussian times a
// quadratic polynomial) and cat states (Gaussians plus cosine fringes) are all
// of this form, so their overlaps reduce to complex Gaussian moments.

#include <complex>
#include <vector>

#include "cvqubit/gaussian_core.hpp"

namespace cvq {

struct AxisFactor {
  double alpha = 1.0;              // > 0
  std::complex<double> beta = 0.0;  // linear exponent coefficient
  int power = 0;                    // monomial degree
};

struct SeparableTerm {
  std::complex<double> coeff = 1.0;
  AxisFactor x;
  AxisFactor p;

  std::complex<double> eval(PhasePoint point) const;
};

class PhaseSpaceFunction {
 public:
  PhaseSpaceFunction() = default;
  explicit PhaseSpaceFunction(std::vector<SeparableTerm> terms)
      : terms_(std::move(terms)) {}

  static PhaseSpaceFunction from(const GaussianComponent& component);
  static PhaseSpaceFunction from(const SignedGaussianMixture& mixture);

  const std::vector<SeparableTerm>& terms() const { return terms_; }
  void add(const SeparableTerm& term) { terms_.push_back(term); }
  void append(const PhaseSpaceFunction& other, double scale = 1.0);

  double operator()(PhasePoint point) const;
  double integral() const;

 private:
  std::vector<SeparableTerm> terms_;
};

// int x^n exp(-alpha x^2 + beta x) dx over the real line.
std::complex<double> gaussian_moment_integral(double alpha,
                                              std::complex<double> beta,
                                              int n);

// int f * g over phase space.
double overlap(const PhaseSpaceFunction& f, const PhaseSpaceFunction& g);

}  // namespace cvq
