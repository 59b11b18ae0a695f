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

// Gaussian states, signed Gaussian mixtures and phase-space grids.
//
// Quadratures use the convention x = (a + a^dag)/sqrt(2), so the vacuum has
// variance 1/2 per quadrature, covariance matrix Gamma_vac = I and Wigner
// function (1/pi) exp(-x^2 - p^2). Covariance matrices are ordered
// (x_1, p_1, x_2, p_2, ...) and carry a factor 2 relative to the plain
// second moments: Gamma_ij = 2 <{dx_i, dx_j}>/2.

#include <Eigen/Dense>

#include <numbers>
#include <vector>

namespace cvq {

inline constexpr double kPi = std::numbers::pi;

class GaussianState {
 public:
  // Checks shapes and symmetry only; see is_physical().
  GaussianState(Eigen::MatrixXd cov, Eigen::VectorXd disp);

  int n_modes() const { return static_cast<int>(disp_.size() / 2); }
  const Eigen::MatrixXd& cov() const { return cov_; }
  const Eigen::VectorXd& disp() const { return disp_; }

  GaussianState with_displacement(Eigen::VectorXd disp) const;

  // All symplectic eigenvalues >= 1 - tol and cov positive definite.
  bool is_physical(double tol = 1e-9) const;

 private:
  Eigen::MatrixXd cov_;
  Eigen::VectorXd disp_;
};

GaussianState make_vacuum(int n_modes);

// Single-mode state with covariance diag(x_var, p_var) (in units of vacuum).
GaussianState make_single_mode(double x_var, double p_var, double x0 = 0.0,
                               double p0 = 0.0);

// Direct sum of two states, modes of `first` come first.
GaussianState direct_sum(const GaussianState& first,
                         const GaussianState& second);

struct ModePair {
  int first = 0;
  int second = 1;
};

// Mixes modes (i, j) = (modes.first, modes.second) with transmission T:
//
//   x_i -> sqrt(T) x_i + sqrt(1-T) x_j
//   x_j -> -sqrt(1-T) x_i + sqrt(T) x_j
//
// and identically for p. Swapping the mode order gives the inverse
// transformation.
GaussianState beam_splitter(const GaussianState& state, double transmission,
                            ModePair modes);

// (pi^n sqrt(det Gamma))^-1 exp(-(x-d)^T Gamma^-1 (x-d)).
double gaussian_wigner_eval(const GaussianState& state,
                            const Eigen::VectorXd& point);

// Moduli of the eigenvalues of i Omega Gamma, one per mode, sorted descending.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov);
std::vector<double> symplectic_eigenvalues(const GaussianState& state);

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;
};

// weight / (pi sqrt(a b)) * exp(-(x-x0)^2/a - (p-p0)^2/b)
struct GaussianComponent {
  double weight = 1.0;
  PhasePoint center;
  double width_x = 1.0;
  double width_p = 1.0;

  double eval(PhasePoint point) const;
  bool same_shape(const GaussianComponent& other) const;
};

class SignedGaussianMixture {
 public:
  SignedGaussianMixture() = default;
  explicit SignedGaussianMixture(std::vector<GaussianComponent> components);

  const std::vector<GaussianComponent>& components() const {
    return components_;
  }
  std::size_t size() const { return components_.size(); }
  double total_weight() const;
  bool is_normalized(double tol = 1e-9) const;

  double operator()(PhasePoint point) const;

  // Adds a component, merging its weight into an existing component of the
  // same center and widths.
  void add(const GaussianComponent& component);

  // Weighted sum sum_k scale_k * mixture_k with like terms gathered.
  static SignedGaussianMixture combine(
      const std::vector<std::pair<double, SignedGaussianMixture>>& terms);

 private:
  std::vector<GaussianComponent> components_;
};

double mixture_eval(const SignedGaussianMixture& state, PhasePoint point);

// Closed-form integral of the product of two components.
double component_overlap(const GaussianComponent& a,
                         const GaussianComponent& b);

// Integral of W1 * W2 over phase space.
double mixture_overlap(const SignedGaussianMixture& s1,
                       const SignedGaussianMixture& s2);

// Purity 2 pi int W^2.
double mixture_purity(const SignedGaussianMixture& state);

// Uniform 1-D grid for composite Simpson quadrature; `points` must be odd.
struct GridSpec {
  double lo = -6.0;
  double hi = 6.0;
  int points = 241;

  double step() const { return (hi - lo) / (points - 1); }
  double coord(int i) const { return lo + i * step(); }
  double simpson_weight(int i) const;
  void validate() const;
};

// Grid wide enough to hold `sigmas` standard deviations of every component.
GridSpec covering_grid(const SignedGaussianMixture& state, double sigmas = 8.0,
                       double min_half_width = 6.0, int points = 241);

struct WignerGrid {
  GridSpec x_axis;
  GridSpec p_axis;
  std::vector<double> values;  // row-major, x index outer

  double at(int ix, int ip) const {
    return values[static_cast<std::size_t>(ix) * p_axis.points + ip];
  }
  double integral() const;
  double min_value() const;
};

template <class F>
WignerGrid tabulate(F&& f, const GridSpec& x_axis, const GridSpec& p_axis) {
  x_axis.validate();
  p_axis.validate();
  WignerGrid grid{x_axis, p_axis, {}};
  grid.values.resize(static_cast<std::size_t>(x_axis.points) * p_axis.points);
  for (int i = 0; i < x_axis.points; ++i) {
    for (int j = 0; j < p_axis.points; ++j) {
      grid.values[static_cast<std::size_t>(i) * p_axis.points + j] =
          f(PhasePoint{x_axis.coord(i), p_axis.coord(j)});
    }
  }
  return grid;
}

template <class F>
double integrate_grid(F&& f, const GridSpec& x_axis, const GridSpec& p_axis) {
  return tabulate(std::forward<F>(f), x_axis, p_axis).integral();
}

}  // namespace cvq
