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

#include "cvqubit/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <map>
#include <random>

#include "cvqubit/errors.hpp"

namespace cvq {
namespace {

using cplx = std::complex<double>;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits, identical on every platform.
double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

Eigen::VectorXcd phase_factors(int dim, double phase) {
  Eigen::VectorXcd d(dim);
  for (int n = 0; n < dim; ++n) d(n) = std::polar(1.0, n * phase);
  return d;
}

struct PhaseBlock {
  double phase = 0.0;
  Eigen::MatrixXd psi;  // samples x (n_max + 1)
  Eigen::VectorXcd factors;
  Eigen::MatrixXd work;  // scratch, same shape as psi
  Eigen::VectorXd prob;
};

std::vector<PhaseBlock> build_blocks(const QuadratureDataset& data,
                                     int n_max) {
  std::map<double, std::vector<double>> by_phase;
  for (const auto& rec : data.records) by_phase[rec.phase].push_back(rec.value);
  std::vector<PhaseBlock> blocks;
  const int dim = n_max + 1;
  for (const auto& [phase, values] : by_phase) {
    PhaseBlock block;
    block.phase = phase;
    block.factors = phase_factors(dim, phase);
    block.psi.resize(static_cast<Eigen::Index>(values.size()), dim);
    for (std::size_t j = 0; j < values.size(); ++j) {
      block.psi.row(static_cast<Eigen::Index>(j)) =
          hermite_functions(n_max, values[j]).transpose();
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

struct Evaluation {
  double log_likelihood = 0.0;
  Eigen::MatrixXcd r_operator;  // (1/N) sum_j Pi_j / p_j
  std::size_t floor_hits = 0;
};

// Blocks are visited in ascending phase order.
Evaluation evaluate(std::vector<PhaseBlock>& blocks,
                    const Eigen::MatrixXcd& rho, double floor) {
  const auto dim = rho.rows();
  Evaluation ev;
  ev.r_operator = Eigen::MatrixXcd::Zero(dim, dim);
  std::size_t total = 0;
  for (auto& block : blocks) {
    // rho in the frame of the rotated quadrature: D^* rho D.
    const Eigen::MatrixXcd rotated =
        block.factors.conjugate().asDiagonal() * rho * block.factors.asDiagonal();
    const Eigen::MatrixXd rotated_re = rotated.real();
    block.work.noalias() = block.psi * rotated_re;
    auto& prob = block.prob;
    prob = block.work.cwiseProduct(block.psi).rowwise().sum();
    for (Eigen::Index j = 0; j < prob.size(); ++j) {
      if (!(prob(j) > floor)) {
        prob(j) = floor;
        ++ev.floor_hits;
      }
      ev.log_likelihood += std::log(prob(j));
    }
    block.work = block.psi.array().colwise() / prob.array();
    const Eigen::MatrixXd local = block.psi.transpose() * block.work;
    ev.r_operator += block.factors.asDiagonal() *
                     local.cast<cplx>() *
                     block.factors.conjugate().asDiagonal();
    total += static_cast<std::size_t>(prob.size());
  }
  ev.r_operator /= static_cast<double>(total);
  return ev;
}

Eigen::MatrixXcd normalized(Eigen::MatrixXcd m) {
  m = 0.5 * (m + m.adjoint()).eval();
  return m / m.trace().real();
}

}  // namespace

std::vector<std::size_t> QuadratureDataset::counts_per_phase() const {
  std::vector<std::size_t> counts(phases.size(), 0);
  for (const auto& rec : records) {
    const auto it = std::find(phases.begin(), phases.end(), rec.phase);
    if (it != phases.end()) ++counts[static_cast<std::size_t>(it - phases.begin())];
  }
  return counts;
}

FockDensityMatrix::FockDensityMatrix(Eigen::MatrixXcd elements)
    : elements_(std::move(elements)) {
  if (elements_.rows() < 1 || elements_.rows() != elements_.cols()) {
    fail(ErrorKind::kInvalidArgument, "density matrix must be square");
  }
  const double herm = (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) {
    fail(ErrorKind::kInvalidState,
         fmt::format("density matrix not Hermitian (deviation {:.3g})", herm));
  }
  if (std::abs(trace() - 1.0) > 1e-10) {
    fail(ErrorKind::kInvalidState,
         fmt::format("density matrix trace {} is not 1", trace()));
  }
  const double min_eig = eigenvalues().minCoeff();
  if (min_eig < -1e-10) {
    fail(ErrorKind::kInvalidState,
         fmt::format("density matrix has eigenvalue {:.3g}", min_eig));
  }
}

FockDensityMatrix FockDensityMatrix::maximally_mixed(int n_max) {
  if (n_max < 0) fail(ErrorKind::kInvalidArgument, "n_max must be >= 0");
  const int dim = n_max + 1;
  return FockDensityMatrix(Eigen::MatrixXcd::Identity(dim, dim) /
                           static_cast<double>(dim));
}

FockDensityMatrix FockDensityMatrix::pure(const Eigen::VectorXcd& ket) {
  const Eigen::VectorXcd v = ket / ket.norm();
  Eigen::MatrixXcd m = v * v.adjoint();
  return FockDensityMatrix(normalized(std::move(m)));
}

Eigen::VectorXd FockDensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(elements_,
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

std::vector<double> uniform_phases(int count) {
  if (count < 1) fail(ErrorKind::kInvalidArgument, "need at least one phase");
  std::vector<double> phases;
  for (int k = 0; k < count; ++k) phases.push_back(kPi * k / count);
  return phases;
}

Eigen::VectorXd hermite_functions(int n_max, double x) {
  if (n_max < 0) fail(ErrorKind::kInvalidArgument, "n_max must be >= 0");
  Eigen::VectorXd psi(n_max + 1);
  psi(0) = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (n_max >= 1) psi(1) = std::sqrt(2.0) * x * psi(0);
  for (int n = 1; n < n_max; ++n) {
    psi(n + 1) = std::sqrt(2.0 / (n + 1)) * x * psi(n) -
                 std::sqrt(static_cast<double>(n) / (n + 1)) * psi(n - 1);
  }
  return psi;
}

Eigen::VectorXcd fock_quadrature_projector(int n_max, double phase, double x) {
  if (n_max < 0 || n_max > kMaxFockProjector) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("n_max = {} outside [0, {}]", n_max, kMaxFockProjector));
  }
  const Eigen::VectorXd psi = hermite_functions(n_max, x);
  return phase_factors(n_max + 1, phase).cwiseProduct(psi.cast<cplx>());
}

double quadrature_pdf(const SignedGaussianMixture& state, double phase,
                      double x) {
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  double total = 0.0;
  for (const auto& comp : state.components()) {
    const double width = comp.width_x * c * c + comp.width_p * s * s;
    const double mean = comp.center.x * c + comp.center.p * s;
    const double dx = x - mean;
    total += comp.weight / std::sqrt(kPi * width) * std::exp(-dx * dx / width);
  }
  return total;
}

double quadrature_pdf(const FockDensityMatrix& rho, double phase, double x) {
  const Eigen::VectorXcd v = fock_quadrature_projector(rho.n_max(), phase, x);
  return (v.adjoint() * rho.elements() * v)(0, 0).real();
}

std::uint64_t phase_stream_seed(std::uint64_t seed, std::size_t phase_index) {
  return splitmix64(seed + (phase_index + 1) * 0x9E3779B97F4A7C15ULL);
}

QuadratureDataset sample_quadratures(const QuadraturePdf& pdf,
                                     const std::vector<double>& phases,
                                     int n_per_phase, std::uint64_t seed,
                                     std::string source_tag,
                                     const SamplerOptions& options) {
  if (phases.empty() || n_per_phase < 1) {
    fail(ErrorKind::kInvalidArgument,
         "sampling needs at least one phase and one sample per phase");
  }
  if (options.knots < 2 || !(options.hi > options.lo)) {
    fail(ErrorKind::kInvalidArgument, "bad sampler grid");
  }
  QuadratureDataset data;
  data.phases = phases;
  data.seed = seed;
  data.source_tag = std::move(source_tag);
  data.records.reserve(phases.size() * static_cast<std::size_t>(n_per_phase));

  const int knots = options.knots;
  const double h = (options.hi - options.lo) / (knots - 1);
  std::vector<double> x(knots), cdf(knots);
  for (std::size_t k = 0; k < phases.size(); ++k) {
    const double phase = phases[k];
    double prev = 0.0;
    for (int i = 0; i < knots; ++i) {
      x[i] = options.lo + i * h;
      double value = pdf(phase, x[i]);
      if (value < -1e-9) {
        fail(ErrorKind::kInvalidState,
             fmt::format("quadrature density {:.3g} < 0 at x = {} (phase {})",
                         value, x[i], phase));
      }
      value = std::max(value, 0.0);
      cdf[i] = i == 0 ? 0.0 : cdf[i - 1] + 0.5 * h * (prev + value);
      prev = value;
    }
    const double total = cdf.back();
    if (!(total > 0.0)) {
      fail(ErrorKind::kInvalidState,
           fmt::format("quadrature density vanishes at phase {}", phase));
    }
    std::mt19937_64 gen(phase_stream_seed(seed, k));
    for (int s = 0; s < n_per_phase; ++s) {
      const double u = uniform01(gen) * total;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      auto hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
          it - cdf.begin(), 1, knots - 1));
      const std::size_t lo = hi - 1;
      const double span = cdf[hi] - cdf[lo];
      const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.5;
      data.records.push_back({phase, x[lo] + frac * h});
    }
  }
  return data;
}

QuadratureDataset sample_quadratures(const SignedGaussianMixture& state,
                                     const std::vector<double>& phases,
                                     int n_per_phase, std::uint64_t seed,
                                     const SamplerOptions& options) {
  return sample_quadratures(
      [&state](double phase, double x) { return quadrature_pdf(state, phase, x); },
      phases, n_per_phase, seed, "gaussian-mixture", options);
}

QuadratureDataset sample_quadratures(const FockDensityMatrix& rho,
                                     const std::vector<double>& phases,
                                     int n_per_phase, std::uint64_t seed,
                                     const SamplerOptions& options) {
  return sample_quadratures(
      [&rho](double phase, double x) { return quadrature_pdf(rho, phase, x); },
      phases, n_per_phase, seed, "fock-density", options);
}

QuadratureDataset bootstrap_resample(const QuadratureDataset& data,
                                     std::uint64_t seed) {
  std::map<double, std::vector<double>> by_phase;
  for (const auto& rec : data.records) by_phase[rec.phase].push_back(rec.value);
  QuadratureDataset out;
  out.phases = data.phases;
  out.seed = seed;
  out.source_tag = data.source_tag + "+bootstrap";
  std::size_t k = 0;
  for (const auto& [phase, values] : by_phase) {
    std::mt19937_64 gen(phase_stream_seed(seed, k++));
    for (std::size_t j = 0; j < values.size(); ++j) {
      const auto pick = static_cast<std::size_t>(uniform01(gen) *
                                                 static_cast<double>(values.size()));
      out.records.push_back({phase, values[std::min(pick, values.size() - 1)]});
    }
  }
  return out;
}

double log_likelihood(const QuadratureDataset& data,
                      const FockDensityMatrix& rho) {
  auto blocks = build_blocks(data, rho.n_max());
  return evaluate(blocks, rho.elements(), 1e-12).log_likelihood;
}

MleResult mle_reconstruct(const QuadratureDataset& data,
                          const MleOptions& options) {
  if (data.records.empty()) {
    fail(ErrorKind::kInvalidArgument, "cannot reconstruct from an empty dataset");
  }
  if (options.n_max < 0 || options.n_max > kMaxFockProjector) {
    fail(ErrorKind::kInvalidArgument,
         fmt::format("n_max = {} outside [0, {}]", options.n_max,
                     kMaxFockProjector));
  }
  if (options.max_iters < 0) {
    fail(ErrorKind::kInvalidArgument, "max_iters must be >= 0");
  }
  const int dim = options.n_max + 1;
  Eigen::MatrixXcd rho =
      options.initial ? options.initial->elements()
                      : FockDensityMatrix::maximally_mixed(options.n_max).elements();
  if (rho.rows() != dim) {
    fail(ErrorKind::kInvalidArgument, "initial state has the wrong dimension");
  }

  auto blocks = build_blocks(data, options.n_max);
  const double floor = options.probability_floor;
  Evaluation current = evaluate(blocks, rho, floor);

  MleResult result{FockDensityMatrix(normalized(rho)), {current.log_likelihood}};
  result.floor_hits = current.floor_hits;
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(dim, dim);

  for (int it = 0; it < options.max_iters; ++it) {
    // Plain R rho R first, then damped steps (1 + e R) of shrinking e.
    Eigen::MatrixXcd candidate;
    Evaluation next;
    bool accepted = false;
    double damping = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 30; ++attempt) {
      const Eigen::MatrixXcd step =
          std::isinf(damping) ? current.r_operator
                              : (identity + damping * current.r_operator).eval();
      candidate = normalized(step * rho * step.adjoint());
      next = evaluate(blocks, candidate, floor);
      if (next.log_likelihood >= current.log_likelihood) {
        accepted = true;
        break;
      }
      damping = std::isinf(damping) ? 1.0 : 0.5 * damping;
    }
    if (!accepted) {
      result.converged = true;
      break;
    }
    if (!std::isinf(damping)) ++result.damped_steps;
    const double gain = next.log_likelihood - current.log_likelihood;
    rho = std::move(candidate);
    current = std::move(next);
    result.log_likelihood.push_back(current.log_likelihood);
    result.iterations = it + 1;
    result.floor_hits = current.floor_hits;
    if (gain <= options.tol * std::abs(current.log_likelihood)) {
      result.converged = true;
      break;
    }
  }
  result.rho = FockDensityMatrix(normalized(rho));
  return result;
}

MleResult mle_reconstruct(const QuadratureDataset& data, int n_max,
                          int max_iters, double tol) {
  MleOptions options;
  options.n_max = n_max;
  options.max_iters = max_iters;
  options.tol = tol;
  return mle_reconstruct(data, options);
}

std::complex<double> fock_wigner_kernel(int m, int n, PhasePoint point) {
  if (m < n) return std::conj(fock_wigner_kernel(n, m, point));
  const int k = m - n;
  const double rr = point.x * point.x + point.p * point.p;
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  const double ratio =
      std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
  cplx z(std::sqrt(2.0) * point.x, -std::sqrt(2.0) * point.p);
  cplx zk = 1.0;
  for (int i = 0; i < k; ++i) zk *= z;
  return sign / kPi * ratio * zk * std::exp(-rr) *
         std::assoc_laguerre(static_cast<unsigned>(n), static_cast<unsigned>(k),
                             2.0 * rr);
}

WignerGrid density_to_wigner(const FockDensityMatrix& rho,
                             const GridSpec& x_axis, const GridSpec& p_axis) {
  const int dim = rho.n_max() + 1;
  return tabulate(
      [&](PhasePoint pt) {
        double w = 0.0;
        for (int m = 0; m < dim; ++m) {
          w += (rho(m, m) * fock_wigner_kernel(m, m, pt)).real();
          for (int n = 0; n < m; ++n) {
            w += 2.0 * (rho(m, n) * fock_wigner_kernel(m, n, pt)).real();
          }
        }
        return w;
      },
      x_axis, p_axis);
}

Eigen::MatrixXcd density_from_mixture(const SignedGaussianMixture& state,
                                      int n_max, const GridSpec& x_axis,
                                      const GridSpec& p_axis) {
  x_axis.validate();
  p_axis.validate();
  const int dim = n_max + 1;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < x_axis.points; ++i) {
    for (int j = 0; j < p_axis.points; ++j) {
      const PhasePoint pt{x_axis.coord(i), p_axis.coord(j)};
      const double weight = 2.0 * kPi * x_axis.simpson_weight(i) *
                            p_axis.simpson_weight(j) * state(pt);
      for (int m = 0; m < dim; ++m) {
        for (int n = 0; n <= m; ++n) {
          rho(m, n) += weight * std::conj(fock_wigner_kernel(m, n, pt));
        }
      }
    }
  }
  for (int m = 0; m < dim; ++m) {
    for (int n = m + 1; n < dim; ++n) rho(m, n) = std::conj(rho(n, m));
  }
  return rho;
}

double uhlmann_fidelity(const Eigen::MatrixXcd& rho,
                        const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    fail(ErrorKind::kInvalidArgument, "fidelity needs equal dimensions");
  }
  // Eigenvalues at rounding level count as zero.
  auto clipped = [](Eigen::VectorXd ev) {
    const double floor = 4.0 * ev.size() * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (auto& v : ev) v = v > floor ? v : 0.0;
    return ev;
  };
  auto psd_sqrt = [&](const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        0.5 * (m + m.adjoint()));
    const Eigen::VectorXd ev = clipped(solver.eigenvalues()).cwiseSqrt();
    return Eigen::MatrixXcd(solver.eigenvectors() * ev.asDiagonal() *
                            solver.eigenvectors().adjoint());
  };
  const Eigen::MatrixXcd root = psd_sqrt(rho);
  const Eigen::MatrixXcd inner = root * sigma * root;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  const double tr = clipped(solver.eigenvalues()).cwiseSqrt().sum();
  return tr * tr;
}

double ket_fidelity(const FockDensityMatrix& rho, const Eigen::VectorXcd& ket) {
  if (ket.size() < rho.n_max() + 1) {
    fail(ErrorKind::kInvalidArgument, "ket shorter than the density matrix");
  }
  const Eigen::VectorXcd v = ket.head(rho.n_max() + 1);
  return (v.adjoint() * rho.elements() * v)(0, 0).real();
}

}  // namespace cvq
