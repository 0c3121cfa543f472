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

#ifndef LOSSYCHAIN_ODE_HPP
#define LOSSYCHAIN_ODE_HPP

// Dormand-Prince 5(4) with embedded error control and 4th order dense output.
// State may be any dense Eigen vector/matrix with real or complex scalars.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <type_traits>
#include <utility>

#include "core.hpp"

namespace lossychain::ode {

struct Options {
  double rtol = 1e-9;
  double atol = 1e-11;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
};

namespace detail {

template <class Scalar>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

/// RMS of err/scale, complex entries counted as two real components.
template <class State>
double error_norm(const State& err, const State& y0, const State& y1, double atol,
                  double rtol) {
  using Scalar = typename State::Scalar;
  if constexpr (is_complex<Scalar>::value) {
    auto sr = (atol + rtol * y0.real().array().abs().max(y1.real().array().abs())).eval();
    auto si = (atol + rtol * y0.imag().array().abs().max(y1.imag().array().abs())).eval();
    const double s = (err.real().array() / sr).square().sum() +
                     (err.imag().array() / si).square().sum();
    return std::sqrt(s / (2.0 * static_cast<double>(err.size())));
  } else {
    auto sc = (atol + rtol * y0.array().abs().max(y1.array().abs())).eval();
    const double s = (err.array() / sc).square().sum();
    return std::sqrt(s / static_cast<double>(err.size()));
  }
}

template <class State>
double scaled_norm(const State& v, const State& y, double atol, double rtol) {
  return error_norm<State>(v, y, y, atol, rtol);
}

}  // namespace detail

/// Adaptive stepper. Rhs: void(double t, const State& y, State& dydt).
template <class State, class Rhs>
class Dopri5 {
 public:
  Dopri5(Rhs rhs, State y0, double t0, Options opt = {})
      : rhs_(std::move(rhs)), opt_(opt), t_(t0), y_(std::move(y0)) {
    if (!(opt_.rtol > 0.0) || !(opt_.atol > 0.0))
      throw ParameterError("ode tolerances must be positive");
    k1_ = y_;
    rhs_(t_, y_, k1_);
    ++evaluations_;
    h_ = opt_.initial_step > 0.0 ? opt_.initial_step : initial_step();
    t_prev_ = t_;
    y_prev_ = y_;
  }

  double time() const { return t_; }
  const State& state() const { return y_; }
  double previous_time() const { return t_prev_; }
  double next_step() const { return h_; }
  std::size_t accepted_steps() const { return accepted_; }
  std::size_t rejected_steps() const { return rejected_; }
  std::size_t evaluations() const { return evaluations_; }

  void set_max_step(double h) { opt_.max_step = h; }

  /// Replaces the state; derivative is re-evaluated.
  void reset(double t, State y) {
    t_ = t;
    y_ = std::move(y);
    rhs_(t_, y_, k1_);
    ++evaluations_;
    t_prev_ = t_;
    y_prev_ = y_;
    has_dense_ = false;
  }

  /// Takes one accepted step, never past t_limit.
  void step(double t_limit) {
    if (steps_++ >= opt_.max_steps) fail("maximum number of steps exceeded");
    const double span = t_limit - t_;
    if (!(span > 0.0)) return;
    double h = std::min({h_, opt_.max_step, span});
    bool rejected_before = false;
    for (;;) {
      const double tiny = 1e-14 * std::max(1.0, std::abs(t_));
      if (h < tiny) fail("step size underflow");
      attempt(h);
      const double err = detail::error_norm<State>(err_, y_, y_new_, opt_.atol, opt_.rtol);
      if (!std::isfinite(err)) {
        ++rejected_;
        rejected_before = true;
        h *= 0.2;
        continue;
      }
      if (err <= 1.0) {
        double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        fac = std::clamp(fac, 0.2, rejected_before ? 1.0 : 5.0);
        commit(h);
        h_ = h * fac;
        if (h == span) h_ = std::max(h_, h);
        return;
      }
      ++rejected_;
      rejected_before = true;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }

  /// Dense output on [previous_time(), time()].
  State interpolate(double t) const {
    if (!has_dense_ || t == t_) return y_;
    const double h = t_ - t_prev_;
    const double th = (t - t_prev_) / h;
    const double th1 = 1.0 - th;
    return (r1_ + th * (r2_ + th1 * (r3_ + th * (r4_ + th1 * r5_)))).eval();
  }

 private:
  // Butcher tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  [[noreturn]] void fail(const char* what) const {
    std::ostringstream os;
    os.precision(17);
    os << what << " at t=" << t_;
    throw NumericError(os.str());
  }

  double initial_step() {
    const double d0 = detail::scaled_norm<State>(y_, y_, opt_.atol, opt_.rtol);
    const double d1n = detail::scaled_norm<State>(k1_, y_, opt_.atol, opt_.rtol);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, opt_.max_step);
    State y1 = (y_ + h0 * k1_).eval();
    State f1 = k1_;
    rhs_(t_ + h0, y1, f1);
    ++evaluations_;
    State df = (f1 - k1_).eval();
    const double d2 = detail::scaled_norm<State>(df, y_, opt_.atol, opt_.rtol) / h0;
    const double dm = std::max(d1n, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, opt_.max_step});
  }

  void attempt(double h) {
    if (k2_.size() == 0) k2_ = k3_ = k4_ = k5_ = k6_ = k7_ = k1_;
    rhs_(t_ + c2 * h, (y_ + h * (a21 * k1_)).eval(), k2_);
    rhs_(t_ + c3 * h, (y_ + h * (a31 * k1_ + a32 * k2_)).eval(), k3_);
    rhs_(t_ + c4 * h, (y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_)).eval(), k4_);
    rhs_(t_ + c5 * h, (y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_)).eval(),
         k5_);
    rhs_(t_ + h,
         (y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_)).eval(), k6_);
    y_new_ = (y_ + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_)).eval();
    rhs_(t_ + h, y_new_, k7_);
    evaluations_ += 6;
    err_ = (h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_)).eval();
  }

  void commit(double h) {
    r1_ = y_;
    r2_ = (y_new_ - y_).eval();
    r3_ = (h * k1_ - r2_).eval();
    r4_ = (r2_ - h * k7_ - r3_).eval();
    r5_ = (h * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k7_)).eval();
    has_dense_ = true;
    t_prev_ = t_;
    y_prev_ = y_;
    t_ += h;
    std::swap(y_, y_new_);
    std::swap(k1_, k7_);
    ++accepted_;
  }

  Rhs rhs_;
  Options opt_;
  double t_;
  double t_prev_;
  double h_ = 0.0;
  State y_, y_prev_, y_new_, err_;
  State k1_, k2_, k3_, k4_, k5_, k6_, k7_;
  State r1_, r2_, r3_, r4_, r5_;
  bool has_dense_ = false;
  std::size_t accepted_ = 0, rejected_ = 0, evaluations_ = 0, steps_ = 0;
};

/// Integrates from t0 to t1 and calls observer(t, y) at t0 + n*dt_out
/// (and at t1). Returns the final state.
template <class State, class Rhs, class Observer>
State integrate_sampled(Rhs rhs, State y0, double t0, double t1, double dt_out,
                        Observer&& observer, Options opt = {}) {
  if (!(t1 > t0)) throw ParameterError("t_final must be positive");
  if (!(dt_out > 0.0)) throw ParameterError("dt_out must be positive");
  const auto n_out = static_cast<std::size_t>(std::floor((t1 - t0) / dt_out * (1.0 + 1e-12)));
  observer(t0, y0);
  Dopri5<State, Rhs> solver(std::move(rhs), std::move(y0), t0, opt);
  std::size_t next = 1;
  auto sample_time = [&](std::size_t n) { return t0 + static_cast<double>(n) * dt_out; };
  while (solver.time() < t1) {
    solver.step(t1);
    const double slack = solver.time() >= t1 ? 1e-12 * std::max(1.0, std::abs(t1)) : 0.0;
    while (next <= n_out && sample_time(next) <= solver.time() + slack) {
      const double ts = std::min(sample_time(next), t1);
      observer(ts, solver.interpolate(ts));
      ++next;
    }
  }
  const double last = sample_time(n_out);
  if (std::abs(last - t1) > 1e-9 * std::max(1.0, std::abs(t1))) observer(t1, solver.state());
  return solver.state();
}

}  // namespace lossychain::ode

#endif  // LOSSYCHAIN_ODE_HPP
