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

// Simulated homodyne acquisition and maximum-likelihood reconstruction in a
// truncated Fock basis.
//
// A homodyne measurement at local-oscillator phase theta records the
// quadrature x_theta = x cos(theta) + p sin(theta). Its eigenstates satisfy
// <n|x_theta> = e^{i n theta} psi_n(x) with psi_n the Hermite functions of the
// vacuum-variance-1/2 convention.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cvqubit/gaussian_core.hpp"

namespace cvq {

inline constexpr int kMaxFockProjector = 60;

struct QuadratureRecord {
  double phase = 0.0;  // radians
  double value = 0.0;
};

struct QuadratureDataset {
  std::vector<QuadratureRecord> records;
  std::vector<double> phases;  // declared phase set
  std::uint64_t seed = 0;
  std::string source_tag;

  std::vector<std::size_t> counts_per_phase() const;
};

class FockDensityMatrix {
 public:
  // Validates Hermiticity (1e-12), unit trace (1e-10) and positivity (1e-10).
  explicit FockDensityMatrix(Eigen::MatrixXcd elements);

  static FockDensityMatrix maximally_mixed(int n_max);
  static FockDensityMatrix pure(const Eigen::VectorXcd& ket);

  int n_max() const { return static_cast<int>(elements_.rows()) - 1; }
  const Eigen::MatrixXcd& elements() const { return elements_; }
  std::complex<double> operator()(int m, int n) const {
    return elements_(m, n);
  }
  double trace() const { return elements_.trace().real(); }
  Eigen::VectorXd eigenvalues() const;

 private:
  Eigen::MatrixXcd elements_;
};

// count phases k pi / count, k = 0..count-1.
std::vector<double> uniform_phases(int count = 12);

// psi_0..psi_{n_max} at x by the three-term recursion.
Eigen::VectorXd hermite_functions(int n_max, double x);

// Components <n|x_theta>, n = 0..n_max; n_max at most kMaxFockProjector.
Eigen::VectorXcd fock_quadrature_projector(int n_max, double phase, double x);

double quadrature_pdf(const SignedGaussianMixture& state, double phase,
                      double x);
double quadrature_pdf(const FockDensityMatrix& rho, double phase, double x);

using QuadraturePdf = std::function<double(double phase, double x)>;

struct SamplerOptions {
  double lo = -8.0;
  double hi = 8.0;
  int knots = 4001;
};

// Seed of the stream for phase k: splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15).
std::uint64_t phase_stream_seed(std::uint64_t seed, std::size_t phase_index);

QuadratureDataset sample_quadratures(const QuadraturePdf& pdf,
                                     const std::vector<double>& phases,
                                     int n_per_phase, std::uint64_t seed,
                                     std::string source_tag,
                                     const SamplerOptions& options = {});
QuadratureDataset sample_quadratures(const SignedGaussianMixture& state,
                                     const std::vector<double>& phases,
                                     int n_per_phase, std::uint64_t seed,
                                     const SamplerOptions& options = {});
QuadratureDataset sample_quadratures(const FockDensityMatrix& rho,
                                     const std::vector<double>& phases,
                                     int n_per_phase, std::uint64_t seed,
                                     const SamplerOptions& options = {});

// Resamples every phase block with replacement, keeping per-phase counts.
QuadratureDataset bootstrap_resample(const QuadratureDataset& data,
                                     std::uint64_t seed);

struct MleOptions {
  int n_max = 10;
  int max_iters = 2000;
  double tol = 1e-10;  // relative log-likelihood gain
  double probability_floor = 1e-12;
  std::optional<FockDensityMatrix> initial;  // maximally mixed if unset
};

struct MleResult {
  FockDensityMatrix rho;
  std::vector<double> log_likelihood;  // entry 0 is the initializer
  int iterations = 0;
  bool converged = false;
  std::size_t floor_hits = 0;  // samples whose probability hit the floor
  int damped_steps = 0;       // iterations that needed a damped update
};

// Iterates rho <- N[R rho R], R = sum_j Pi_j / p_j, falling back to the
// damped update N[(1 + e R) rho (1 + e R)] whenever the plain step would lower
// the likelihood.
MleResult mle_reconstruct(const QuadratureDataset& data,
                          const MleOptions& options);
MleResult mle_reconstruct(const QuadratureDataset& data, int n_max,
                          int max_iters, double tol);

double log_likelihood(const QuadratureDataset& data,
                      const FockDensityMatrix& rho);

// Wigner function of |m><n|.
std::complex<double> fock_wigner_kernel(int m, int n, PhasePoint point);

WignerGrid density_to_wigner(const FockDensityMatrix& rho,
                             const GridSpec& x_axis = {},
                             const GridSpec& p_axis = {});

// rho_mn = 2 pi int W conj(W_{|m><n|}) on a grid. The result is not
// renormalized; its trace shows how much weight lies below n_max.
Eigen::MatrixXcd density_from_mixture(const SignedGaussianMixture& state,
                                      int n_max, const GridSpec& x_axis,
                                      const GridSpec& p_axis);

// (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2
double uhlmann_fidelity(const Eigen::MatrixXcd& rho,
                        const Eigen::MatrixXcd& sigma);

double ket_fidelity(const FockDensityMatrix& rho, const Eigen::VectorXcd& ket);

}  // namespace cvq
