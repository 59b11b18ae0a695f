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

#include "cvqubit/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "cvqubit/errors.hpp"

namespace cvq {

GaussianState::GaussianState(Eigen::MatrixXd cov, Eigen::VectorXd disp)
    : cov_(std::move(cov)), disp_(std::move(disp)) {
  const auto dim = disp_.size();
  if (dim == 0 || dim % 2 != 0) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("displacement length {} is not 2n", dim));
  }
  if (cov_.rows() != dim || cov_.cols() != dim) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("covariance is {}x{}, expected {}x{}", cov_.rows(),
                     cov_.cols(), dim, dim));
  }
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    fail(ErrorKind::kInvalidArgument, "covariance matrix is not symmetric");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();
}

GaussianState GaussianState::with_displacement(Eigen::VectorXd disp) const {
  return GaussianState(cov_, std::move(disp));
}

bool GaussianState::is_physical(double tol) const {
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() != Eigen::Success) return false;
  const auto nu = symplectic_eigenvalues(cov_);
  return std::all_of(nu.begin(), nu.end(),
                     [tol](double v) { return v >= 1.0 - tol; });
}

GaussianState make_vacuum(int n_modes) {
  if (n_modes < 1) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("vacuum needs at least one mode, got {}", n_modes));
  }
  return GaussianState(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes),
                       Eigen::VectorXd::Zero(2 * n_modes));
}

GaussianState make_single_mode(double x_var, double p_var, double x0,
                               double p0) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
  cov(0, 0) = x_var;
  cov(1, 1) = p_var;
  Eigen::VectorXd disp(2);
  disp << x0, p0;
  return GaussianState(std::move(cov), std::move(disp));
}

GaussianState direct_sum(const GaussianState& first,
                         const GaussianState& second) {
  const auto n1 = first.disp().size();
  const auto n2 = second.disp().size();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
  cov.topLeftCorner(n1, n1) = first.cov();
  cov.bottomRightCorner(n2, n2) = second.cov();
  Eigen::VectorXd disp(n1 + n2);
  disp << first.disp(), second.disp();
  return GaussianState(std::move(cov), std::move(disp));
}

GaussianState beam_splitter(const GaussianState& state, double transmission,
                            ModePair modes) {
  const int n = state.n_modes();
  if (n < 2) {
    fail(ErrorKind::kInvalidArgument, "beam splitter needs two modes");
  }
  if (modes.first == modes.second || modes.first < 0 || modes.second < 0 ||
      modes.first >= n || modes.second >= n) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("bad mode pair ({}, {}) for a {}-mode state", modes.first,
                     modes.second, n));
  }
  if (!(transmission > 0.0 && transmission < 1.0)) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("transmission {} outside (0, 1)", transmission));
  }
  const double t = std::sqrt(transmission);
  const double r = std::sqrt(1.0 - transmission);
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  for (int q = 0; q < 2; ++q) {
    const int i = 2 * modes.first + q;
    const int j = 2 * modes.second + q;
    v(i, i) = t;
    v(i, j) = r;
    v(j, i) = -r;
    v(j, j) = t;
  }
  Eigen::MatrixXd cov = v * state.cov() * v.transpose();
  Eigen::VectorXd disp = v * state.disp();
  return GaussianState(std::move(cov), std::move(disp));
}

double gaussian_wigner_eval(const GaussianState& state,
                            const Eigen::VectorXd& point) {
  if (point.size() != state.disp().size()) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("point has {} coordinates, state has {}", point.size(),
                     state.disp().size()));
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(state.cov());
  const double det = lu.determinant();
  if (!(det > 1e-12)) {
    fail(ErrorKind::kNumericalDegeneracy,
         fmt::format("covariance determinant {} is degenerate", det));
  }
  const Eigen::VectorXd delta = point - state.disp();
  const double quad = delta.dot(lu.solve(delta));
  return std::exp(-quad) /
         (std::pow(kPi, state.n_modes()) * std::sqrt(det));
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0 || cov.rows() % 2 != 0) {
    fail(ErrorKind::kInvalidArgument, "covariance must be 2n x 2n");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    fail(ErrorKind::kInvalidArgument, "covariance matrix is not symmetric");
  }
  const auto dim = cov.rows();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(omega * cov, false);
  std::vector<double> moduli;
  for (Eigen::Index k = 0; k < dim; ++k) {
    moduli.push_back(std::abs(solver.eigenvalues()(k)));
  }
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  // Eigenvalues come in +-i nu pairs.
  std::vector<double> nu;
  for (std::size_t k = 0; k < moduli.size(); k += 2) {
    nu.push_back(0.5 * (moduli[k] + moduli[k + 1]));
  }
  return nu;
}

std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
  return symplectic_eigenvalues(state.cov());
}

double GaussianComponent::eval(PhasePoint point) const {
  const double dx = point.x - center.x;
  const double dp = point.p - center.p;
  return weight / (kPi * std::sqrt(width_x * width_p)) *
         std::exp(-dx * dx / width_x - dp * dp / width_p);
}

bool GaussianComponent::same_shape(const GaussianComponent& other) const {
  return center.x == other.center.x && center.p == other.center.p &&
         width_x == other.width_x && width_p == other.width_p;
}

SignedGaussianMixture::SignedGaussianMixture(
    std::vector<GaussianComponent> components) {
  for (const auto& c : components) add(c);
}

void SignedGaussianMixture::add(const GaussianComponent& component) {
  if (!(component.width_x > 0.0) || !(component.width_p > 0.0)) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("component widths ({}, {}) must be positive",
                     component.width_x, component.width_p));
  }
  for (auto& c : components_) {
    if (c.same_shape(component)) {
      c.weight += component.weight;
      return;
    }
  }
  components_.push_back(component);
}

SignedGaussianMixture SignedGaussianMixture::combine(
    const std::vector<std::pair<double, SignedGaussianMixture>>& terms) {
  SignedGaussianMixture out;
  for (const auto& [scale, mixture] : terms) {
    if (scale == 0.0) continue;
    for (auto c : mixture.components()) {
      c.weight *= scale;
      out.add(c);
    }
  }
  return out;
}

double SignedGaussianMixture::total_weight() const {
  double total = 0.0;
  for (const auto& c : components_) total += c.weight;
  return total;
}

bool SignedGaussianMixture::is_normalized(double tol) const {
  return std::abs(total_weight() - 1.0) <= tol;
}

double SignedGaussianMixture::operator()(PhasePoint point) const {
  double value = 0.0;
  for (const auto& c : components_) value += c.eval(point);
  return value;
}

double mixture_eval(const SignedGaussianMixture& state, PhasePoint point) {
  return state(point);
}

double component_overlap(const GaussianComponent& a,
                         const GaussianComponent& b) {
  const double sx = a.width_x + b.width_x;
  const double sp = a.width_p + b.width_p;
  const double dx = a.center.x - b.center.x;
  const double dp = a.center.p - b.center.p;
  return a.weight * b.weight / (kPi * std::sqrt(sx * sp)) *
         std::exp(-dx * dx / sx - dp * dp / sp);
}

double mixture_overlap(const SignedGaussianMixture& s1,
                       const SignedGaussianMixture& s2) {
  double total = 0.0;
  for (const auto& a : s1.components()) {
    for (const auto& b : s2.components()) total += component_overlap(a, b);
  }
  return total;
}

double mixture_purity(const SignedGaussianMixture& state) {
  return 2.0 * kPi * mixture_overlap(state, state);
}

double GridSpec::simpson_weight(int i) const {
  const double h = step();
  if (i == 0 || i == points - 1) return h / 3.0;
  return (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
}

void GridSpec::validate() const {
  if (points < 3 || points % 2 == 0) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("Simpson grid needs an odd point count >= 3, got {}",
                     points));
  }
  if (!(hi > lo)) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("grid range [{}, {}] is empty", lo, hi));
  }
}

GridSpec covering_grid(const SignedGaussianMixture& state, double sigmas,
                       double min_half_width, int points) {
  double half = min_half_width;
  for (const auto& c : state.components()) {
    // Standard deviation along each axis is sqrt(width / 2).
    half = std::max(half, std::abs(c.center.x) +
                              sigmas * std::sqrt(c.width_x / 2.0));
    half = std::max(half, std::abs(c.center.p) +
                              sigmas * std::sqrt(c.width_p / 2.0));
  }
  return GridSpec{-half, half, points};
}

double WignerGrid::integral() const {
  double total = 0.0;
  for (int i = 0; i < x_axis.points; ++i) {
    double row = 0.0;
    for (int j = 0; j < p_axis.points; ++j) {
      row += p_axis.simpson_weight(j) * at(i, j);
    }
    total += x_axis.simpson_weight(i) * row;
  }
  return total;
}

double WignerGrid::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

}  // namespace cvq
