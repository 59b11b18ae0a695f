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

#include "cvqubit/squeezed_qubit.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "cvqubit/errors.hpp"

namespace cvq {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// coeff * x^mx p^mp exp(-ax x^2 - ap p^2)
SeparableTerm centered_term(double coeff, double ax, int mx, double ap,
                            int mp) {
  SeparableTerm t;
  t.coeff = coeff;
  t.x = AxisFactor{ax, 0.0, mx};
  t.p = AxisFactor{ap, 0.0, mp};
  return t;
}

struct QubitBasisTerms {
  PhaseSpaceFunction gaussian;   // G = exp(-X^2 - P^2)/pi
  PhaseSpaceFunction quadratic;  // (X^2 + P^2) G
  PhaseSpaceFunction linear_x;   // X G
  PhaseSpaceFunction linear_p;   // P G
};

// X = x e^-r, P = p e^r.
QubitBasisTerms qubit_basis_terms(double r) {
  const double ax = std::exp(-2.0 * r);
  const double ap = std::exp(2.0 * r);
  const double c = 1.0 / kPi;
  QubitBasisTerms b;
  b.gaussian.add(centered_term(c, ax, 0, ap, 0));
  b.quadratic.add(centered_term(c * ax, ax, 2, ap, 0));
  b.quadratic.add(centered_term(c * ap, ax, 0, ap, 2));
  b.linear_x.add(centered_term(c * std::exp(-r), ax, 1, ap, 0));
  b.linear_p.add(centered_term(c * std::exp(r), ax, 0, ap, 1));
  return b;
}

bool better(double value, double best, std::size_t i, std::size_t best_i,
            double phi, double best_phi) {
  constexpr double kTie = 1e-12;
  if (value > best + kTie) return true;
  if (value < best - kTie) return false;
  if (i != best_i) return i < best_i;
  return std::abs(phi) < std::abs(best_phi) - 1e-15;
}

// Vertex offset of the parabola through (-1, fm), (0, f0), (1, fp).
double parabola_offset(double fm, double f0, double fp) {
  const double curvature = fm - 2.0 * f0 + fp;
  if (!(curvature < 0.0)) return 0.0;
  return std::clamp(0.5 * (fm - fp) / curvature, -1.0, 1.0);
}

}  // namespace

void SqueezedQubitParams::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("squeezing r = {} must be positive", r));
  }
  if (!(theta >= 0.0 && theta <= kPi)) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("theta = {} outside [0, pi]", theta));
  }
  if (!(phi >= -kPi && phi <= kPi)) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("phi = {} outside [-pi, pi]", phi));
  }
}

PhaseSpaceFunction squeezed_qubit_wigner(const SqueezedQubitParams& params) {
  params.validate();
  const auto b = qubit_basis_terms(params.r);
  const double ct = std::cos(params.theta);
  const double st = std::sin(params.theta);
  PhaseSpaceFunction w;
  w.append(b.gaussian, ct);
  w.append(b.quadratic, 1.0 - ct);
  w.append(b.linear_x, kSqrt2 * st * std::cos(params.phi));
  w.append(b.linear_p, kSqrt2 * st * std::sin(params.phi));
  return w;
}

PhaseSpaceFunction cat_wigner(const CatStateParams& cat) {
  if (!(cat.alpha > 0.0) || !std::isfinite(cat.alpha)) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("cat amplitude {} must be positive", cat.alpha));
  }
  const double sign = cat.parity == CatParity::kEven ? 1.0 : -1.0;
  const double q = kSqrt2 * cat.alpha;
  const double norm =
      1.0 / (kPi * 2.0 * (1.0 + sign * std::exp(-2.0 * cat.alpha * cat.alpha)));
  PhaseSpaceFunction w;
  for (double side : {1.0, -1.0}) {
    SeparableTerm lobe;
    lobe.coeff = norm * std::exp(-q * q);
    lobe.x = AxisFactor{1.0, 2.0 * side * q, 0};
    lobe.p = AxisFactor{1.0, 0.0, 0};
    w.add(lobe);
  }
  // Interference fringes 2 exp(-x^2 - p^2) cos(2 q p).
  SeparableTerm fringe;
  fringe.coeff = sign * 2.0 * norm;
  fringe.x = AxisFactor{1.0, 0.0, 0};
  fringe.p = AxisFactor{1.0, std::complex<double>(0.0, 2.0 * q), 0};
  w.add(fringe);
  return w;
}

double pure_state_fidelity(const PhaseSpaceFunction& pure_target,
                           const PhaseSpaceFunction& state) {
  const double f = 2.0 * kPi * overlap(pure_target, state);
  if (!(f >= -1e-6 && f <= 1.0 + 1e-6)) {
    fail(ErrorKind::kNumerical,
         fmt::format("fidelity {} outside [0, 1] beyond tolerance", f));
  }
  if (f < 0.0 && f >= -1e-9) return 0.0;
  if (f > 1.0 && f <= 1.0 + 1e-9) return 1.0;
  return f;
}

double fidelity(const SqueezedQubitParams& target,
                const SignedGaussianMixture& state) {
  return pure_state_fidelity(squeezed_qubit_wigner(target),
                             PhaseSpaceFunction::from(state));
}

double cat_fidelity(const SignedGaussianMixture& state,
                    const CatStateParams& cat) {
  return pure_state_fidelity(cat_wigner(cat), PhaseSpaceFunction::from(state));
}

double BlochProjection::fidelity(double theta, double phi) const {
  return base + polar * std::cos(theta) +
         std::sin(theta) * (along_x * std::cos(phi) + along_p * std::sin(phi));
}

BlochProjection bloch_projection(const PhaseSpaceFunction& state, double r) {
  if (!(r > 0.0)) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("squeezing r = {} must be positive", r));
  }
  const auto b = qubit_basis_terms(r);
  const double two_pi = 2.0 * kPi;
  const double g = two_pi * overlap(b.gaussian, state);
  const double q = two_pi * overlap(b.quadratic, state);
  BlochProjection proj;
  proj.r = r;
  proj.base = q;
  proj.polar = g - q;
  proj.along_x = kSqrt2 * two_pi * overlap(b.linear_x, state);
  proj.along_p = kSqrt2 * two_pi * overlap(b.linear_p, state);
  return proj;
}

BlochProjection bloch_projection(const SignedGaussianMixture& state,
                                 double r) {
  return bloch_projection(PhaseSpaceFunction::from(state), r);
}

BlochMap bloch_fidelity_map(const BlochProjection& projection, int n_theta,
                            int n_phi) {
  if (n_theta < 2 || n_phi < 2) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("map needs at least 2x2 points, got {}x{}", n_theta,
                     n_phi));
  }
  BlochMap map;
  const auto nt = static_cast<std::size_t>(n_theta);
  const auto np = static_cast<std::size_t>(n_phi);
  for (std::size_t i = 0; i < nt; ++i) {
    map.theta.push_back(kPi * static_cast<double>(i) / (n_theta - 1));
  }
  for (std::size_t j = 0; j < np; ++j) {
    map.phi.push_back(-kPi + 2.0 * kPi * static_cast<double>(j) / (n_phi - 1));
  }
  map.values.resize(nt * np);
  std::size_t bi = 0;
  std::size_t bj = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nt; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      const double f = projection.fidelity(map.theta[i], map.phi[j]);
      map.values[i * np + j] = f;
      if (better(f, best, i, bi, map.phi[j], map.phi[bj])) {
        best = f;
        bi = i;
        bj = j;
      }
    }
  }

  // phi is periodic and its grid includes both -pi and pi.
  auto phi_index = [&](std::ptrdiff_t j) {
    const auto period = static_cast<std::ptrdiff_t>(np) - 1;
    return static_cast<std::size_t>(((j % period) + period) % period);
  };
  const double dtheta = kPi / (n_theta - 1);
  const double dphi = 2.0 * kPi / (n_phi - 1);
  double u = 0.0;  // theta offset in cells
  double v = 0.0;  // phi offset in cells
  const bool pole = bi == 0 || bi + 1 == nt;
  if (!pole) {
    double f[3][3];
    for (int a = -1; a <= 1; ++a) {
      for (int c = -1; c <= 1; ++c) {
        f[a + 1][c + 1] = map.at(bi + a, phi_index(static_cast<std::ptrdiff_t>(bj) + c));
      }
    }
    // Least-squares quadratic on the 3x3 stencil.
    double gu = 0.0, gv = 0.0, huu = 0.0, hvv = 0.0;
    for (int k = 0; k < 3; ++k) {
      gu += (f[2][k] - f[0][k]) / 6.0;
      gv += (f[k][2] - f[k][0]) / 6.0;
      huu += (f[2][k] - 2.0 * f[1][k] + f[0][k]) / 3.0;
      hvv += (f[k][2] - 2.0 * f[k][1] + f[k][0]) / 3.0;
    }
    const double huv = (f[2][2] - f[2][0] - f[0][2] + f[0][0]) / 4.0;
    const double det = huu * hvv - huv * huv;
    if (huu < 0.0 && det > 0.0) {
      u = -(hvv * gu - huv * gv) / det;
      v = -(huu * gv - huv * gu) / det;
    }
    if (!(std::abs(u) <= 1.0 && std::abs(v) <= 1.0) || !(huu < 0.0 && det > 0.0)) {
      u = parabola_offset(f[0][1], f[1][1], f[2][1]);
      v = parabola_offset(f[1][0], f[1][1], f[1][2]);
    }
  }
  double theta_star = std::clamp(map.theta[bi] + u * dtheta, 0.0, kPi);
  double phi_star = map.phi[bj] + v * dphi;
  if (phi_star >= kPi || phi_star < -kPi) phi_star = wrap_angle(phi_star);
  const double refined = projection.fidelity(theta_star, phi_star);
  if (refined >= best) {
    map.theta_star = theta_star;
    map.phi_star = phi_star;
    map.f_star = refined;
  } else {
    map.theta_star = map.theta[bi];
    map.phi_star = map.phi[bj];
    map.f_star = best;
  }
  return map;
}

BlochMap bloch_fidelity_map(const SignedGaussianMixture& state, double r,
                            int n_theta, int n_phi) {
  return bloch_fidelity_map(bloch_projection(state, r), n_theta, n_phi);
}

double ideal_theta_from_rates(double ratio) {
  if (!(ratio >= 0.0)) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("click-rate ratio {} must be >= 0", ratio));
  }
  // atan2 handles ratio = 0 (theta = pi) and ratio = inf (theta = 0).
  return 2.0 * std::atan2(1.0, std::sqrt(ratio));
}

double wrap_angle(double angle) {
  double a = std::fmod(angle + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

double qubit_phase_from_displacement(double phi_disp) {
  return wrap_angle(kPi - phi_disp);
}

Eigen::VectorXd squeezed_vacuum_amplitudes(double r, int n_max) {
  if (n_max < 0) fail(ErrorKind::kInvalidArgument, "n_max must be >= 0");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n_max + 1);
  const double tanh_r = std::tanh(r);
  double amp = 1.0 / std::sqrt(std::cosh(r));
  for (int n = 0; n <= n_max; n += 2) {
    c(n) = amp;
    // c_{n+2} / c_n = tanh r sqrt((n+1)(n+2)) / (n+2)
    amp *= tanh_r * std::sqrt((n + 1.0) * (n + 2.0)) / (n + 2.0);
  }
  return c;
}

Eigen::VectorXd squeezed_photon_amplitudes(double r, int n_max) {
  if (n_max < 0) fail(ErrorKind::kInvalidArgument, "n_max must be >= 0");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n_max + 1);
  const double tanh_r = std::tanh(r);
  double amp = std::pow(std::cosh(r), -1.5);
  for (int n = 1; n <= n_max; n += 2) {
    c(n) = amp;
    // c_{n+2} / c_n = tanh r sqrt((n+1)(n+2)) / (n+1)
    amp *= tanh_r * std::sqrt((n + 1.0) * (n + 2.0)) / (n + 1.0);
  }
  return c;
}

Eigen::VectorXcd squeezed_qubit_ket(const SqueezedQubitParams& params,
                                    int n_max) {
  params.validate();
  const Eigen::VectorXd vac = squeezed_vacuum_amplitudes(params.r, n_max);
  const Eigen::VectorXd one = squeezed_photon_amplitudes(params.r, n_max);
  const std::complex<double> phase = std::polar(1.0, params.phi);
  return std::cos(0.5 * params.theta) * vac.cast<std::complex<double>>() +
         phase * std::sin(0.5 * params.theta) *
             one.cast<std::complex<double>>();
}

}  // namespace cvq
