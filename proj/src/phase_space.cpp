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

#include "cvqubit/phase_space.hpp"

#include <cmath>

#include "cvqubit/errors.hpp"

namespace cvq {
namespace {

using cplx = std::complex<double>;

template <class T>
T ipow(T base, int n) {
  T out = 1.0;
  for (int k = 0; k < n; ++k) out *= base;
  return out;
}

cplx axis_value(const AxisFactor& f, double v) {
  return ipow(v, f.power) * std::exp(-f.alpha * v * v + f.beta * v);
}

// E[(mu + sigma Z)^n] for Z standard normal, valid for complex mu.
cplx shifted_moment(cplx mu, double var, int n) {
  cplx total = 0.0;
  double binom = 1.0;      // C(n, k)
  double double_fact = 1;  // (k-1)!!
  for (int k = 0; k <= n; ++k) {
    if (k > 0) binom = binom * (n - k + 1) / k;
    if (k % 2 == 0) {
      if (k >= 2) double_fact *= (k - 1);
      total += binom * ipow(mu, n - k) * double_fact * ipow(var, k / 2);
    }
  }
  return total;
}

cplx product_integral(const SeparableTerm& a, const SeparableTerm& b,
                      bool conjugate_b) {
  const cplx cb = conjugate_b ? std::conj(b.coeff) : b.coeff;
  const cplx bx = conjugate_b ? std::conj(b.x.beta) : b.x.beta;
  const cplx bp = conjugate_b ? std::conj(b.p.beta) : b.p.beta;
  return a.coeff * cb *
         gaussian_moment_integral(a.x.alpha + b.x.alpha, a.x.beta + bx,
                                  a.x.power + b.x.power) *
         gaussian_moment_integral(a.p.alpha + b.p.alpha, a.p.beta + bp,
                                  a.p.power + b.p.power);
}

}  // namespace

std::complex<double> SeparableTerm::eval(PhasePoint point) const {
  return coeff * axis_value(x, point.x) * axis_value(p, point.p);
}

PhaseSpaceFunction PhaseSpaceFunction::from(const GaussianComponent& c) {
  const double x0 = c.center.x;
  const double p0 = c.center.p;
  SeparableTerm term;
  term.coeff = c.weight / (kPi * std::sqrt(c.width_x * c.width_p)) *
               std::exp(-x0 * x0 / c.width_x - p0 * p0 / c.width_p);
  term.x = AxisFactor{1.0 / c.width_x, 2.0 * x0 / c.width_x, 0};
  term.p = AxisFactor{1.0 / c.width_p, 2.0 * p0 / c.width_p, 0};
  return PhaseSpaceFunction({term});
}

PhaseSpaceFunction PhaseSpaceFunction::from(
    const SignedGaussianMixture& mixture) {
  PhaseSpaceFunction out;
  for (const auto& c : mixture.components()) out.append(from(c));
  return out;
}

void PhaseSpaceFunction::append(const PhaseSpaceFunction& other,
                                double scale) {
  for (auto term : other.terms_) {
    term.coeff *= scale;
    terms_.push_back(term);
  }
}

double PhaseSpaceFunction::operator()(PhasePoint point) const {
  double value = 0.0;
  for (const auto& t : terms_) value += t.eval(point).real();
  return value;
}

double PhaseSpaceFunction::integral() const {
  double total = 0.0;
  for (const auto& t : terms_) {
    total += (t.coeff * gaussian_moment_integral(t.x.alpha, t.x.beta, t.x.power) *
              gaussian_moment_integral(t.p.alpha, t.p.beta, t.p.power))
                 .real();
  }
  return total;
}

std::complex<double> gaussian_moment_integral(double alpha,
                                              std::complex<double> beta,
                                              int n) {
  if (!(alpha > 0.0)) {
    fail(ErrorKind::kInvalidArgument, "Gaussian exponent must be positive");
  }
  const cplx mu = beta / (2.0 * alpha);
  const double var = 1.0 / (2.0 * alpha);
  return std::sqrt(kPi / alpha) * std::exp(beta * beta / (4.0 * alpha)) *
         shifted_moment(mu, var, n);
}

double overlap(const PhaseSpaceFunction& f, const PhaseSpaceFunction& g) {
  // Re(A) Re(B) = (Re(A B) + Re(A conj(B))) / 2
  double total = 0.0;
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) {
      total += 0.5 * (product_integral(a, b, false).real() +
                      product_integral(a, b, true).real());
    }
  }
  return total;
}

}  // namespace cvq
