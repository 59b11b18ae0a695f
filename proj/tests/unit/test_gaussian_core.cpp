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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cvqubit/errors.hpp"
#include "cvqubit/gaussian_core.hpp"

namespace cvq {
namespace {

constexpr double kR = 0.38;

// Dense V(T) acting on (x1, p1, x2, p2), written out independently of the
// library.
Eigen::Matrix4d splitter_matrix(double t) {
  const double s = std::sqrt(t);
  const double c = std::sqrt(1.0 - t);
  Eigen::Matrix4d v;
  v << s, 0, c, 0,
       0, s, 0, c,
       -c, 0, s, 0,
       0, -c, 0, s;
  return v;
}

GaussianComponent vacuum_component(double weight = 1.0) {
  return GaussianComponent{weight, {0.0, 0.0}, 1.0, 1.0};
}

double grid_overlap(const SignedGaussianMixture& a,
                    const SignedGaussianMixture& b, const GridSpec& axis) {
  return integrate_grid([&](PhasePoint pt) { return a(pt) * b(pt); }, axis, axis);
}

TEST(Vacuum, CovarianceIsIdentity) {
  const auto one = make_vacuum(1);
  EXPECT_TRUE(one.cov().isApprox(Eigen::MatrixXd::Identity(2, 2)));
  EXPECT_TRUE(one.disp().isZero());
  const auto two = make_vacuum(2);
  EXPECT_TRUE(two.cov().isApprox(Eigen::MatrixXd::Identity(4, 4)));
  EXPECT_EQ(two.n_modes(), 2);
}

TEST(Vacuum, RejectsZeroModes) {
  try {
    make_vacuum(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
  }
}

TEST(Vacuum, WignerAtOrigin) {
  EXPECT_NEAR(gaussian_wigner_eval(make_vacuum(1), Eigen::Vector2d(0, 0)), 1 / kPi, 1e-15);
  EXPECT_NEAR(gaussian_wigner_eval(make_vacuum(1), Eigen::Vector2d(1, 0)),
              std::exp(-1.0) / kPi, 1e-15);
  EXPECT_NEAR(gaussian_wigner_eval(make_vacuum(2), Eigen::Vector4d::Zero()),
              1 / (kPi * kPi), 1e-15);
}

TEST(GaussianState, RejectsAsymmetricCovariance) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2, 2);
  cov(0, 1) = 0.1;
  EXPECT_THROW(GaussianState(cov, Eigen::VectorXd::Zero(2)), Error);
}

TEST(GaussianWigner, SqueezedOriginIsInversePi) {
  const auto sq = make_single_mode(std::exp(2 * kR), std::exp(-2 * kR));
  EXPECT_NEAR(gaussian_wigner_eval(sq, Eigen::Vector2d(0, 0)), 1 / kPi, 1e-14);
}

TEST(GaussianWigner, SingularCovarianceIsAnError) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
  cov(0, 0) = 1.0;
  const GaussianState st(cov, Eigen::VectorXd::Zero(2));
  try {
    gaussian_wigner_eval(st, Eigen::Vector2d(0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumericalDegeneracy);
  }
}

TEST(GaussianWigner, IntegratesToOne) {
  const auto st = make_single_mode(2.3, 0.6, 0.4, -0.2);
  const GridSpec axis{-9, 9, 361};
  const double total = integrate_grid(
      [&](PhasePoint pt) {
        return gaussian_wigner_eval(st, Eigen::Vector2d(pt.x, pt.p));
      },
      axis, axis);
  EXPECT_NEAR(total, 1.0, 1e-6);
}

TEST(BeamSplitter, VacuumIsInvariant) {
  for (double t : {0.1, 0.5, 0.95}) {
    const auto out = beam_splitter(make_vacuum(2), t, {0, 1});
    EXPECT_TRUE(out.cov().isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-14));
  }
}

TEST(BeamSplitter, MatchesDenseProduct) {
  const auto in = direct_sum(make_single_mode(std::exp(2 * kR), std::exp(-2 * kR)),
                             make_vacuum(1));
  const auto out = beam_splitter(in, 0.95, {0, 1});
  const Eigen::Matrix4d v = splitter_matrix(0.95);
  const Eigen::Matrix4d expected = v * in.cov() * v.transpose();
  EXPECT_LT((out.cov() - expected).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(out.cov()(0, 0), 0.95 * std::exp(0.76) + 0.05, 1e-14);
}

TEST(BeamSplitter, SwappedModesInvert) {
  const auto in = direct_sum(make_single_mode(3.0, 1.0 / 3.0, 0.2, 0.1),
                             make_vacuum(1));
  const auto mixed = beam_splitter(in, 0.5, {0, 1});
  const Eigen::Matrix4d v = splitter_matrix(0.5);
  EXPECT_LT((mixed.cov() - v * in.cov() * v.transpose()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(mixed.cov()(0, 2), -0.5 * (3.0 - 1.0), 1e-14);
  const auto back = beam_splitter(mixed, 0.5, {1, 0});
  EXPECT_LT((back.cov() - in.cov()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((back.disp() - in.disp()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BeamSplitter, RejectsBadArguments) {
  const auto st = make_vacuum(2);
  EXPECT_THROW(beam_splitter(st, 0.0, {0, 1}), Error);
  EXPECT_THROW(beam_splitter(st, 1.0, {0, 1}), Error);
  EXPECT_THROW(beam_splitter(st, 0.5, {0, 0}), Error);
  EXPECT_THROW(beam_splitter(make_vacuum(1), 0.5, {0, 1}), Error);
}

TEST(BeamSplitter, PreservesSymplecticEigenvalues) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
  cov.block(0, 0, 2, 2) << 2.5, 0.3, 0.3, 0.9;
  cov.block(2, 2, 2, 2) << 1.7, 0.0, 0.0, 1.2;
  const GaussianState st(cov, Eigen::VectorXd::Zero(4));
  const auto before = symplectic_eigenvalues(st);
  const auto after = symplectic_eigenvalues(beam_splitter(st, 0.73, {0, 1}));
  ASSERT_EQ(before.size(), after.size());
  for (std::size_t i = 0; i < before.size(); ++i) {
    EXPECT_NEAR(before[i], after[i], 1e-10);
  }
}

TEST(SymplecticEigenvalues, KnownCases) {
  const auto vac = symplectic_eigenvalues(make_vacuum(2));
  ASSERT_EQ(vac.size(), 2u);
  EXPECT_NEAR(vac[0], 1.0, 1e-12);
  EXPECT_NEAR(vac[1], 1.0, 1e-12);
  const auto sq = symplectic_eigenvalues(make_single_mode(std::exp(2 * kR), std::exp(-2 * kR)));
  EXPECT_NEAR(sq[0], 1.0, 1e-12);
  const auto th = symplectic_eigenvalues(make_single_mode(3.0, 3.0));
  EXPECT_NEAR(th[0], 3.0, 1e-12);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(1, 0) = 0.5;
  EXPECT_THROW(symplectic_eigenvalues(bad), Error);
}

TEST(Mixture, Evaluation) {
  const SignedGaussianMixture one({vacuum_component()});
  EXPECT_NEAR(mixture_eval(one, {0, 0}), 1 / kPi, 1e-15);
  SignedGaussianMixture two;
  two.add(vacuum_component(2.0));
  two.add(GaussianComponent{-1.0, {0.0, 0.0}, 1.0, 1.0});
  EXPECT_EQ(two.size(), 1u);  // identical shapes gather
  EXPECT_NEAR(mixture_eval(two, {0, 0}), 1 / kPi, 1e-15);
  EXPECT_TRUE(two.is_normalized());
}

TEST(Mixture, RejectsNonPositiveWidths) {
  SignedGaussianMixture m;
  EXPECT_THROW(m.add(GaussianComponent{1.0, {0, 0}, 0.0, 1.0}), Error);
  EXPECT_THROW(m.add(GaussianComponent{1.0, {0, 0}, 1.0, -1.0}), Error);
}

TEST(Overlap, VacuumCases) {
  const SignedGaussianMixture vac({vacuum_component()});
  EXPECT_NEAR(mixture_overlap(vac, vac), 1 / (2 * kPi), 1e-15);
  const SignedGaussianMixture shifted(
      {GaussianComponent{1.0, {std::sqrt(2.0), 0.0}, 1.0, 1.0}});
  EXPECT_NEAR(mixture_overlap(vac, shifted), std::exp(-1.0) / (2 * kPi), 1e-15);
  EXPECT_NEAR(grid_overlap(vac, shifted, GridSpec{}), std::exp(-1.0) / (2 * kPi), 1e-10);
}

TEST(Overlap, SqueezedWithVacuum) {
  const SignedGaussianMixture vac({vacuum_component()});
  const SignedGaussianMixture sq(
      {GaussianComponent{1.0, {0, 0}, std::exp(2 * kR), std::exp(-2 * kR)}});
  const double expected = 1.0 / (2 * kPi * std::cosh(kR));
  EXPECT_NEAR(mixture_overlap(vac, sq), expected, 1e-15);
  EXPECT_NEAR(grid_overlap(vac, sq, GridSpec{}), expected, 1e-10);
}

TEST(Overlap, SymmetricBilinearAndBounded) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> width(0.5, 3.0), shift(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const GaussianComponent a{0.7, {shift(gen), shift(gen)}, width(gen), width(gen)};
    const GaussianComponent b{0.3, {shift(gen), shift(gen)}, width(gen), width(gen)};
    const GaussianComponent c{1.0, {shift(gen), shift(gen)}, width(gen), width(gen)};
    const SignedGaussianMixture ab({a, b});
    const SignedGaussianMixture cc({c});
    EXPECT_NEAR(mixture_overlap(ab, cc), mixture_overlap(cc, ab), 1e-15);
    EXPECT_NEAR(mixture_overlap(ab, cc),
                component_overlap(a, c) + component_overlap(b, c), 1e-15);
    EXPECT_LE(mixture_overlap(ab, ab), 1 / (2 * kPi) + 1e-9);
  }
  const SignedGaussianMixture pure(
      {GaussianComponent{1.0, {0.3, 0.1}, std::exp(0.5), std::exp(-0.5)}});
  EXPECT_NEAR(mixture_overlap(pure, pure), 1 / (2 * kPi), 1e-12);
}

TEST(Grid, SimpsonIntegratesPolynomialsExactly) {
  const GridSpec axis{-1.0, 2.0, 31};
  const double v = integrate_grid(
      [](PhasePoint pt) { return pt.x * pt.x * pt.x + pt.p * pt.p; }, axis, axis);
  // int_{-1}^{2} int_{-1}^{2} (x^3 + p^2) = 3 * 15/4 + 3 * 3
  EXPECT_NEAR(v, 3 * 3.75 + 3 * 3.0, 1e-12);
  EXPECT_THROW((GridSpec{-1, 1, 30}.validate()), Error);
}

}  // namespace
}  // namespace cvq
