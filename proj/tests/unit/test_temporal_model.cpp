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

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <random>

#include "cvqubit/errors.hpp"
#include "cvqubit/temporal_model.hpp"

namespace cvq {
namespace {

using boost::math::quadrature::gauss_kronrod;
using Fn = std::function<double(double)>;

double integrate(const Fn& f, double a, double b) {
  if (b <= a) return 0.0;
  return gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-12);
}

// Adaptive quadrature over [-w, w] with breakpoints at the kinks.
double integrate_line(const Fn& f, double w, std::vector<double> kinks) {
  kinks.push_back(-w);
  kinks.push_back(w);
  std::sort(kinks.begin(), kinks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
    total += integrate(f, kinks[i], kinks[i + 1]);
  }
  return total;
}

// int int f(t) g(s) e^{-decay |t - s|} dt ds by nested quadrature.
double oracle_double(const Fn& f, const Fn& g, double decay, double w) {
  return integrate_line(
      [&](double t) {
        const double ft = f(t);
        if (ft == 0.0) return 0.0;
        return ft * integrate_line(
                        [&](double s) { return g(s) * std::exp(-decay * std::abs(t - s)); },
                        w, {0.0, t});
      },
      w, {0.0});
}

// Mode functions written out directly.
Fn psi_a(double g, double k) {
  const double n = g * g * g * k * k * k * (g + k) /
                   (std::pow(g, 4) + std::pow(g, 3) * k - 4 * g * g * k * k +
                    g * std::pow(k, 3) + std::pow(k, 4));
  return [=](double t) {
    return std::sqrt(n) * (std::exp(-g * std::abs(t)) / g - std::exp(-k * std::abs(t)) / k);
  };
}

Fn f_b(double k, double eta) {
  return [=](double t) { return t <= 0.0 ? std::sqrt(2 * k * eta) * std::exp(k * t) : 0.0; };
}

Eigen::Matrix4d oracle_covariance(const ExperimentParams& p) {
  const double g = p.opo_bandwidth, e = p.pump_level, k = p.filter_bandwidth;
  const double t = p.tap_transmission;
  const Fn psi = psi_a(g, k);
  const Fn fa = [&](double s) { return std::sqrt(p.signal_efficiency) * psi(s); };
  const Fn fb = f_b(k, p.trigger_efficiency);
  const double w = 40.0 / std::min(g - e, k);
  const double x = g * e / (g - e), pp = -g * e / (g + e);
  Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();
  cov(0, 0) += 2 * t * x * oracle_double(fa, fa, g - e, w);
  cov(1, 1) += 2 * t * pp * oracle_double(fa, fa, g + e, w);
  cov(2, 2) += 2 * (1 - t) * x * oracle_double(fb, fb, g - e, w);
  cov(3, 3) += 2 * (1 - t) * pp * oracle_double(fb, fb, g + e, w);
  cov(0, 2) = cov(2, 0) = -2 * std::sqrt(t * (1 - t)) * x * oracle_double(fa, fb, g - e, w);
  cov(1, 3) = cov(3, 1) = -2 * std::sqrt(t * (1 - t)) * pp * oracle_double(fa, fb, g + e, w);
  return cov;
}

// Default-parameter entries from an independent scipy quadrature of the same integrals.
constexpr double kG11 = 2.2833839547095547;
constexpr double kG22 = 0.542038080566305;
constexpr double kG33 = 1.001370210606445;
constexpr double kG44 = 0.9993267672360054;
constexpr double kG13 = -0.03736878459013409;
constexpr double kG24 = 0.014549589624514376;
constexpr double kNsq = 0.0001742444606126492;

TEST(OpoAutocorrelation, EqualTimeValues) {
  const double g = 2 * kPi * 4.5e6;
  EXPECT_NEAR(opo_autocorrelation(Quadrature::kX, 0, g, 0.3 * g) / g, 0.3 / 0.7, 1e-15);
  EXPECT_NEAR(opo_autocorrelation(Quadrature::kP, 0, g, 0.3 * g) / g, -0.3 / 1.3, 1e-15);
  EXPECT_EQ(opo_autocorrelation(Quadrature::kX, 1e-7, g, 0.0), 0.0);
}

TEST(OpoAutocorrelation, DecaysSymmetrically) {
  const double g = 1.0, e = 0.4;
  const double a = opo_autocorrelation(Quadrature::kX, 0.7, g, e);
  EXPECT_DOUBLE_EQ(a, opo_autocorrelation(Quadrature::kX, -0.7, g, e));
  EXPECT_NEAR(a, g * e / (g - e) * std::exp(-(g - e) * 0.7), 1e-15);
}

TEST(OpoAutocorrelation, AboveThreshold) {
  try {
    opo_autocorrelation(Quadrature::kX, 0, 1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kAboveThreshold);
  }
}

TEST(SignalMode, NormalizedOverWindow) {
  const double g = 2 * kPi * 4.5e6, k = 2 * kPi * 25e6;
  const double norm = integrate_line(
      [&](double t) { return std::pow(signal_mode_function(t, g, k), 2); }, 2e-6, {0.0});
  EXPECT_NEAR(norm, 1.0, 1e-6);
  EXPECT_NEAR(signal_mode(g, k).norm_squared(), 1.0, 1e-12);
}

TEST(SignalMode, PeakValueAndSymmetry) {
  const double k = 2.0, g = 1.0;
  const Fn ref = psi_a(g, k);
  EXPECT_NEAR(signal_mode_function(0, g, k), ref(0), 1e-14);
  // Normalize the bare shape numerically and compare the peak.
  const double raw = integrate_line(
      [&](double t) {
        return std::pow(std::exp(-g * std::abs(t)) / g - std::exp(-k * std::abs(t)) / k, 2);
      },
      40.0, {0.0});
  EXPECT_NEAR(signal_mode_function(0, g, k), (1 / g - 1 / k) / std::sqrt(raw), 1e-10);
  for (double t : {0.1, 0.5, 2.0, 7.0}) {
    EXPECT_DOUBLE_EQ(signal_mode_function(t, g, k), signal_mode_function(-t, g, k));
  }
}

TEST(SignalMode, DegenerateBandwidths) {
  try {
    signal_mode_function(0, 3.0, 3.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateMode);
  }
}

TEST(TriggerFilter, NormCausalityAndDecay) {
  const double k = 2 * kPi * 25e6, eta = 0.1;
  const double norm = integrate_line(
      [&](double t) { return std::pow(trigger_filter_function(t, k, eta), 2); },
      40.0 / k, {0.0});
  EXPECT_NEAR(norm, eta, 1e-12);
  EXPECT_NEAR(trigger_filter(k, eta).norm_squared(), eta, 1e-15);
  EXPECT_EQ(trigger_filter_function(1e-9, k, eta), 0.0);
  EXPECT_NEAR(trigger_filter_function(0, k, eta) / trigger_filter_function(-1 / k, k, eta),
              std::exp(1.0), 1e-12);
}

TEST(CorrelationIntegral, MatchesNestedQuadrature) {
  const double g = 1.0, k = 25.0 / 4.5;
  const auto psi = signal_mode(g, k);
  const auto trig = trigger_filter(k, 0.3);
  const Fn fpsi = [&](double t) { return psi(t); };
  const Fn ftrig = [&](double t) { return trig(t); };
  for (double decay : {0.7, 1.3}) {
    EXPECT_NEAR(correlation_integral(psi, psi, decay), oracle_double(fpsi, fpsi, decay, 30.0), 1e-10);
    EXPECT_NEAR(correlation_integral(trig, trig, decay), oracle_double(ftrig, ftrig, decay, 30.0), 1e-10);
    EXPECT_NEAR(correlation_integral(psi, trig, decay), oracle_double(fpsi, ftrig, decay, 30.0), 1e-10);
  }
}

TEST(BuildCovariance, NoPumpIsVacuum) {
  ExperimentParams p;
  p.pump_level = 0.0;
  EXPECT_TRUE(build_covariance(p).cov().isApprox(Eigen::MatrixXd::Identity(4, 4), 1e-15));
}

TEST(BuildCovariance, DefaultParameterValues) {
  const auto cov = build_covariance(ExperimentParams{}).cov();
  EXPECT_NEAR(cov(0, 0), kG11, 1e-10);
  EXPECT_NEAR(cov(1, 1), kG22, 1e-10);
  EXPECT_NEAR(cov(2, 2), kG33, 1e-10);
  EXPECT_NEAR(cov(3, 3), kG44, 1e-10);
  EXPECT_NEAR(cov(0, 2), kG13, 1e-10);
  EXPECT_NEAR(cov(1, 3), kG24, 1e-10);
  for (auto [i, j] : {std::pair{0, 1}, {0, 3}, {1, 2}, {2, 3}}) {
    EXPECT_EQ(cov(i, j), 0.0);
  }
}

TEST(BuildCovariance, MatchesAdaptiveQuadrature) {
  ExperimentParams p;
  p.signal_efficiency = 1.0;
  p.trigger_efficiency = 1.0;
  const auto cov = build_covariance(p).cov();
  // Same setup with rates in units of gamma.
  ExperimentParams scaled = p;
  scaled.opo_bandwidth = 1.0;
  scaled.pump_level = p.pump_level / p.opo_bandwidth;
  scaled.filter_bandwidth = p.filter_bandwidth / p.opo_bandwidth;
  EXPECT_LT((build_covariance(scaled).cov() - cov).cwiseAbs().maxCoeff(), 1e-12);
  const Eigen::Matrix4d ref = oracle_covariance(scaled);
  EXPECT_LT((cov - Eigen::MatrixXd(ref)).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT(cov(1, 1), 1.0);
  EXPECT_GT(cov(0, 0), 1.0);
}

TEST(BuildCovariance, PhysicalAcrossRandomSweep) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ratio(0.05, 0.9), tap(0.5, 0.99), eta(0.1, 1.0);
  for (int i = 0; i < 10; ++i) {
    ExperimentParams p;
    p.pump_level = ratio(gen) * p.opo_bandwidth;
    p.tap_transmission = tap(gen);
    p.signal_efficiency = eta(gen);
    p.trigger_efficiency = eta(gen);
    const auto st = build_covariance(p);
    for (double nu : symplectic_eigenvalues(st)) EXPECT_GE(nu, 1.0 - 1e-9);
    EXPECT_GT(st.cov()(0, 2) * st.cov()(1, 3), -1.0);  // finite
    EXPECT_LT(st.cov()(0, 2), 0.0);
    EXPECT_GT(st.cov()(1, 3), 0.0);
  }
}

TEST(BuildCovariance, MonotoneInPump) {
  ExperimentParams p;
  Eigen::MatrixXd prev = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 1; i <= 9; ++i) {
    p.pump_level = 0.1 * i * p.opo_bandwidth;
    const Eigen::MatrixXd normal =
        build_covariance(p).cov() - Eigen::MatrixXd::Identity(4, 4);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        if (normal(r, c) != 0.0) EXPECT_GT(std::abs(normal(r, c)), std::abs(prev(r, c)));
      }
    }
    prev = normal;
  }
}

TEST(BuildCovariance, NoSignalEfficiency) {
  ExperimentParams p;
  p.signal_efficiency = 0.0;
  const auto cov = build_covariance(p).cov();
  EXPECT_EQ(cov(0, 0), 1.0);
  EXPECT_EQ(cov(1, 1), 1.0);
  EXPECT_EQ(cov(0, 2), 0.0);
  EXPECT_EQ(cov(1, 3), 0.0);
  EXPECT_NEAR(cov(2, 2), kG33, 1e-10);
}

TEST(BuildCovariance, InvalidParameters) {
  ExperimentParams p;
  p.tap_transmission = 1.2;
  EXPECT_THROW(build_covariance(p), Error);
  p = ExperimentParams{};
  p.pump_level = p.opo_bandwidth;
  try {
    build_covariance(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kAboveThreshold);
  }
  p = ExperimentParams{};
  p.squeezing_click_rate = p.dark_count_rate = 0.0;
  try {
    build_covariance(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoClick);
  }
}

TEST(TriggerPhotonNumber, Values) {
  EXPECT_EQ(trigger_photon_number(make_vacuum(2)), 0.0);
  ExperimentParams p;
  const double n = trigger_photon_number(build_covariance(p));
  EXPECT_NEAR(n, kNsq, 1e-13);
  p.trigger_efficiency /= 2;
  EXPECT_NEAR(trigger_photon_number(build_covariance(p)), n / 2, 1e-15);
}

TEST(TriggerPhotonNumber, Inconsistent) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(4, 4);
  cov(2, 2) = cov(3, 3) = 0.9;
  const GaussianState st(cov, Eigen::VectorXd::Zero(4));
  try {
    trigger_photon_number(st);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInconsistentState);
  }
}

TEST(DisplacementVector, RatioScaling) {
  ExperimentParams p;
  const auto st = build_covariance(p);
  EXPECT_TRUE(displacement_vector(p, st).disp().isZero());

  p.displacement_click_rate = p.squeezing_click_rate;
  const auto d = displacement_vector(p, st).disp();
  EXPECT_NEAR(d(2) * d(2) + d(3) * d(3), 2 * kNsq, 1e-15);
  EXPECT_EQ(d(0), 0.0);
  EXPECT_EQ(d(1), 0.0);

  p.displacement_angle = kPi / 2;
  p.displacement_click_rate = 4 * p.squeezing_click_rate;
  const auto q = displacement_vector(p, st).disp();
  EXPECT_NEAR(q(2), 0.0, 1e-15);
  EXPECT_NEAR(q(3), 2 * std::sqrt(2 * kNsq), 1e-14);

  ExperimentParams doubled = p;
  doubled.displacement_click_rate *= 2;
  doubled.squeezing_click_rate *= 2;
  EXPECT_TRUE(displacement_vector(doubled, st).disp().isApprox(q, 1e-15));
}

TEST(DisplacementVector, UndefinedRatio) {
  ExperimentParams p;
  p.squeezing_click_rate = 0.0;
  p.displacement_click_rate = 100.0;
  try {
    displacement_vector(p, make_vacuum(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUndefinedRatio);
  }
}

}  // namespace
}  // namespace cvq
