// Copyright 2026 The lossychain Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "lossychain/ode.hpp"

namespace lc = lossychain;
using lc::Complex;
using lc::ComplexVector;
using lc::RealVector;

namespace {

struct Rotation {
  double omega;
  void operator()(double, const ComplexVector& y, ComplexVector& dy) const {
    dy = Complex(0.0, omega) * y;
  }
};

}  // namespace

TEST(Dopri5, ExponentialDecay) {
  auto rhs = [](double, const RealVector& y, RealVector& dy) { dy = -y; };
  RealVector y0(1);
  y0 << 1.0;
  lc::ode::Dopri5<RealVector, decltype(rhs)> s(rhs, y0, 0.0, {1e-10, 1e-12});
  while (s.time() < 5.0) s.step(5.0);
  EXPECT_DOUBLE_EQ(s.time(), 5.0);
  EXPECT_NEAR(s.state()(0), std::exp(-5.0), 1e-10);
}

TEST(Dopri5, ComplexRotationAndDenseOutput) {
  ComplexVector y0(2);
  y0 << 1.0, Complex(0.0, 2.0);
  lc::ode::Dopri5<ComplexVector, Rotation> s(Rotation{1.3}, y0, 0.0, {1e-11, 1e-13});
  double worst = 0.0;
  while (s.time() < 10.0) {
    const double t0 = s.time();
    s.step(10.0);
    for (double f : {0.25, 0.5, 0.75}) {
      const double t = t0 + f * (s.time() - t0);
      const ComplexVector y = s.interpolate(t);
      worst = std::max(worst, (y - std::exp(Complex(0.0, 1.3 * t)) * y0).norm());
    }
  }
  EXPECT_LT(worst, 1e-8);
  EXPECT_NEAR(std::abs(s.state()(1)), 2.0, 1e-9);
}

TEST(Dopri5, TighterToleranceGivesSmallerError) {
  auto run = [](double rtol) {
    ComplexVector y0(1);
    y0 << 1.0;
    lc::ode::Dopri5<ComplexVector, Rotation> s(Rotation{2.0}, y0, 0.0, {rtol, rtol * 1e-2});
    while (s.time() < 20.0) s.step(20.0);
    return std::abs(s.state()(0) - std::exp(Complex(0.0, 40.0)));
  };
  const double e6 = run(1e-6), e9 = run(1e-9);
  EXPECT_LT(e9, e6 / 50.0);
  EXPECT_LT(e9, 1e-6);
}

TEST(Dopri5, FifthOrderConvergenceAtFixedStep) {
  // fixed steps via max_step with an effectively disabled error control
  auto run = [](double h) {
    ComplexVector y0(1);
    y0 << 1.0;
    lc::ode::Options o{1.0, 1.0};
    o.initial_step = h;
    o.max_step = h;
    lc::ode::Dopri5<ComplexVector, Rotation> s(Rotation{1.0}, y0, 0.0, o);
    while (s.time() < 2.0 - 1e-12) s.step(2.0);
    return std::abs(s.state()(0) - std::exp(Complex(0.0, 2.0)));
  };
  const double r = run(0.1) / run(0.05);
  EXPECT_GT(r, 20.0);  // 2^5 = 32 for a fifth-order solution
}

TEST(IntegrateSampled, SamplesOnGridAndEndpoint) {
  std::vector<double> ts;
  ComplexVector y0(1);
  y0 << 1.0;
  lc::ode::integrate_sampled<ComplexVector>(
      Rotation{1.0}, y0, 0.0, 1.05, 0.1,
      [&](double t, const ComplexVector& y) {
        ts.push_back(t);
        EXPECT_NEAR(std::abs(y(0) - std::exp(Complex(0.0, t))), 0.0, 1e-8);
      },
      {});
  ASSERT_EQ(ts.size(), 12u);
  for (std::size_t n = 0; n < 11; ++n) EXPECT_DOUBLE_EQ(ts[n], 0.1 * static_cast<double>(n));
  EXPECT_DOUBLE_EQ(ts.back(), 1.05);
}

TEST(IntegrateSampled, ExactMultipleKeepsLastSample) {
  std::vector<double> ts;
  ComplexVector y0(1);
  y0 << 1.0;
  const double T = 2.0 * lc::pi / 0.3;
  lc::ode::integrate_sampled<ComplexVector>(
      Rotation{0.3}, y0, 0.0, 6.0 * T, T / 64.0, [&](double t, const ComplexVector&) { ts.push_back(t); },
      {});
  EXPECT_EQ(ts.size(), 6u * 64u + 1u);
  EXPECT_NEAR(ts.back(), 6.0 * T, 1e-9);
}

TEST(Dopri5, StepSizeUnderflowIsReported) {
  RealVector y0 = RealVector::Zero(1);
  auto blowup = [](double t, const RealVector& y, RealVector& dy) {
    dy.resize(1);
    dy(0) = y(0) * y(0) + 1.0 / (1.0 - t) / (1.0 - t);
  };
  lc::ode::Dopri5<RealVector, decltype(blowup)> s(blowup, y0, 0.0, {1e-10, 1e-12});
  EXPECT_THROW(
      {
        while (s.time() < 2.0) s.step(2.0);
      },
      lc::NumericError);
}
