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

#ifndef LOSSYCHAIN_PROPAGATOR_HPP
#define LOSSYCHAIN_PROPAGATOR_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bands.hpp"
#include "core.hpp"
#include "lattice.hpp"
#include "ode.hpp"

namespace lossychain {

struct WaveFunction {
  ComplexVector amplitudes;
  double time = 0.0;
};

struct GaussianPacketSpec {
  double x0 = 0.0;
  double k0 = 0.0;
  double sigma = 1.0;
};

/// Sampled densities of a trajectory.
struct DensityTrace {
  std::vector<double> times;
  RealMatrix site_density;          // rows = times, columns = sites -L..L
  RealMatrix renormalised_density;  // rows sum to 1 unless the row is fully decayed
  std::vector<double> total_norm;
  std::vector<ComplexVector> trajectory;
  std::vector<std::size_t> zero_norm_rows;
  bool boundary_spill = false;
  double first_spill_time = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr double spill_fraction = 1e-3;
inline constexpr int spill_margin = 3;

inline WaveFunction normalized(ComplexVector v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw ParameterError("state has zero norm");
  return {v / n, 0.0};
}

/// psi_j ~ exp(-(j-x0)^2 / 2 sigma^2 + i k0 (j-x0)), unit norm.
inline WaveFunction make_gaussian(const LatticeSpec& spec, const GaussianPacketSpec& g) {
  if (!(g.sigma > 0.0)) throw ParameterError("sigma must be positive");
  const int L = spec.half_width();
  ComplexVector v(spec.sites());
  double lmax = -std::numeric_limits<double>::infinity();
  for (int j = -L; j <= L; ++j) lmax = std::max(lmax, -(j - g.x0) * (j - g.x0) / (2 * g.sigma * g.sigma));
  for (int j = -L; j <= L; ++j) {
    const double d = j - g.x0;
    v(j + L) = std::exp(-d * d / (2.0 * g.sigma * g.sigma) - lmax) * std::polar(1.0, g.k0 * d);
  }
  return normalized(v);
}

inline WaveFunction make_delta(const LatticeSpec& spec, int site) {
  ComplexVector v = ComplexVector::Zero(spec.sites());
  v(spec.index(site)) = 1.0;
  return {v, 0.0};
}

/// Balanced nonlinear Bloch state (A on even, B on odd sites) at quasimomentum
/// k times a Gaussian envelope. upper selects the mu_+ branch.
inline WaveFunction make_nonlinear_bloch_packet(const LatticeSpec& spec, bool upper, double k,
                                                double x0, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  const double gamma = uniform_gamma(spec);
  const double ck = std::cos(k);
  if (!(2.0 * std::abs(ck) > gamma)) throw ParameterError("no balanced Bloch state at this k");
  double v = 0.5 * std::asin(gamma / (2.0 * ck));
  if (upper) v = pi / 2.0 - v;
  const auto [A, B] = amplitudes(0.0, v);
  const int L = spec.half_width();
  ComplexVector psi(spec.sites());
  for (int j = -L; j <= L; ++j) {
    const double d = j - x0;
    psi(j + L) = ((j % 2 == 0) ? A : B) * std::polar(1.0, k * j) *
                 std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return normalized(psi);
}

/// d|psi|^2/dt = 2 sum_j gamma_j ((-1)^j - 1) |psi_j|^2.
inline double norm_derivative_check(const LatticeSpec& spec, const ComplexVector& psi) {
  double d = 0.0;
  for (int j = -spec.half_width(); j <= spec.half_width(); ++j)
    d += 2.0 * spec.decay_at(j) * (parity_sign(j) - 1) * std::norm(psi(spec.index(j)));
  return d;
}

namespace detail {

struct LatticeRhs {
  std::vector<Complex> diag;  // F j + loss
  double g = 0.0;
  void operator()(double, const ComplexVector& y, ComplexVector& dy) const {
    const Eigen::Index M = y.size();
    dy.resize(M);
    for (Eigen::Index a = 0; a < M; ++a) {
      Complex h = diag[static_cast<std::size_t>(a)] * y(a);
      if (g != 0.0) h += g * std::norm(y(a)) * y(a);
      if (a > 0) h -= y(a - 1);
      if (a + 1 < M) h -= y(a + 1);
      dy(a) = Complex(h.imag(), -h.real());  // -i h
    }
  }
};

inline void append_sample(DensityTrace& tr, const LatticeSpec& spec, double t,
                          const ComplexVector& psi) {
  tr.times.push_back(t);
  tr.trajectory.push_back(psi);
  const RealVector d = psi.cwiseAbs2();
  const double n = d.sum();
  tr.total_norm.push_back(n);
  const int M = spec.sites();
  if (!(n > 0.0) && M > 0) tr.zero_norm_rows.push_back(tr.times.size() - 1);
  double edge = 0.0;
  for (int a = 0; a < M; ++a)
    if (a < spill_margin || a >= M - spill_margin) edge += d(a);
  if (n > 0.0 && edge >= spill_fraction * n && !tr.boundary_spill) {
    tr.boundary_spill = true;
    tr.first_spill_time = t;
  }
}

inline void finish_trace(DensityTrace& tr, int M) {
  const auto nt = static_cast<Eigen::Index>(tr.times.size());
  tr.site_density.resize(nt, M);
  tr.renormalised_density.resize(nt, M);
  for (Eigen::Index r = 0; r < nt; ++r) {
    const RealVector d = tr.trajectory[static_cast<std::size_t>(r)].cwiseAbs2();
    tr.site_density.row(r) = d.transpose();
    const double n = tr.total_norm[static_cast<std::size_t>(r)];
    if (n > 0.0) tr.renormalised_density.row(r) = d.transpose() / n;
    else tr.renormalised_density.row(r).setZero();
  }
}

inline DensityTrace evolve_lattice(const LatticeSpec& spec, const WaveFunction& psi0,
                                   double t_final, double dt_out, double g,
                                   const ode::Options& opt) {
  if (psi0.amplitudes.size() != spec.sites())
    throw ParameterError("initial state length does not match lattice");
  if (!(t_final > 0.0)) throw ParameterError("t_final must be positive");
  if (!(dt_out > 0.0)) throw ParameterError("dt_out must be positive");
  LatticeRhs rhs;
  rhs.g = g;
  for (int j = -spec.half_width(); j <= spec.half_width(); ++j)
    rhs.diag.push_back(spec.tilt() * j + spec.loss_term(j));
  DensityTrace tr;
  ode::integrate_sampled<ComplexVector>(
      rhs, psi0.amplitudes, psi0.time, psi0.time + t_final, dt_out,
      [&](double t, const ComplexVector& y) { append_sample(tr, spec, t, y); }, opt);
  finish_trace(tr, spec.sites());
  return tr;
}

}  // namespace detail

/// Default integrator tolerances for lattice propagation.
inline ode::Options propagator_options() { return {1e-11, 1e-13}; }

/// i dpsi_j/dt = -(psi_{j+1} + psi_{j-1}) + F j psi_j + i gamma_j ((-1)^j - 1) psi_j.
inline DensityTrace evolve_single_particle(const LatticeSpec& spec, const WaveFunction& psi0,
                                           double t_final, double dt_out,
                                           const ode::Options& opt = propagator_options()) {
  return detail::evolve_lattice(spec, psi0, t_final, dt_out, 0.0, opt);
}

/// Adds g |psi_j|^2 psi_j (g = spec.interaction()).
inline DensityTrace evolve_mean_field(const LatticeSpec& spec, const WaveFunction& psi0,
                                      double t_final, double dt_out,
                                      const ode::Options& opt = propagator_options()) {
  return detail::evolve_lattice(spec, psi0, t_final, dt_out, spec.interaction(), opt);
}

/// Mean over sample pairs (t, t + lag) inside [t_begin, t_end] of the cosine
/// similarity of mean-subtracted renormalised density rows. Lags are in samples.
inline std::vector<double> density_autocorrelation(const DensityTrace& tr, double t_begin,
                                                   double t_end, int max_lag) {
  std::vector<Eigen::Index> rows;
  for (std::size_t r = 0; r < tr.times.size(); ++r)
    if (tr.times[r] >= t_begin - 1e-9 && tr.times[r] <= t_end + 1e-9)
      rows.push_back(static_cast<Eigen::Index>(r));
  std::vector<RealVector> x;
  for (auto r : rows) {
    RealVector v = tr.renormalised_density.row(r).transpose();
    v.array() -= v.mean();
    const double n = v.norm();
    x.push_back(n > 0.0 ? RealVector(v / n) : v);
  }
  std::vector<double> c(static_cast<std::size_t>(max_lag + 1), std::numeric_limits<double>::quiet_NaN());
  for (int lag = 0; lag <= max_lag; ++lag) {
    double s = 0.0;
    int n = 0;
    for (std::size_t i = 0; i + static_cast<std::size_t>(lag) < x.size(); ++i) {
      s += x[i].dot(x[i + static_cast<std::size_t>(lag)]);
      ++n;
    }
    if (n > 0) c[static_cast<std::size_t>(lag)] = s / n;
  }
  return c;
}

/// First and second moments of a density row over sites -L..L.
inline double centre_of_mass(const RealVector& density) {
  const Eigen::Index M = density.size();
  const double L = static_cast<double>((M - 1) / 2);
  double s = 0.0, n = 0.0;
  for (Eigen::Index a = 0; a < M; ++a) {
    s += (static_cast<double>(a) - L) * density(a);
    n += density(a);
  }
  return n > 0.0 ? s / n : std::numeric_limits<double>::quiet_NaN();
}

inline double beam_width(const RealVector& density) {
  const Eigen::Index M = density.size();
  const double L = static_cast<double>((M - 1) / 2);
  const double mu = centre_of_mass(density);
  double s = 0.0, n = 0.0;
  for (Eigen::Index a = 0; a < M; ++a) {
    const double x = static_cast<double>(a) - L - mu;
    s += x * x * density(a);
    n += density(a);
  }
  return n > 0.0 ? std::sqrt(s / n) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace lossychain

#endif  // LOSSYCHAIN_PROPAGATOR_HPP
