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

#ifndef LOSSYCHAIN_SEMICLASSICS_HPP
#define LOSSYCHAIN_SEMICLASSICS_HPP

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "bands.hpp"
#include "core.hpp"
#include "lattice.hpp"
#include "ode.hpp"
#include "propagator.hpp"

namespace lossychain {

/// Packet centre (q, p) and symmetric covariance block.
struct PhaseSpaceState {
  double q = 0.0;
  double p = 0.0;
  double s_qq = 1.0;
  double s_qp = 0.0;
  double s_pp = 1.0;
  Band band = Band::minus;
  double time = 0.0;

  double det() const { return s_qq * s_pp - s_qp * s_qp; }
};

/// Minimum-uncertainty covariance of a Gaussian of width sigma.
inline PhaseSpaceState packet_state(double q, double p, double sigma, Band band) {
  return {q, p, 2.0 * sigma * sigma, 0.0, 1.0 / (2.0 * sigma * sigma), band, 0.0};
}

/// xi_+-(q, p) = F q + E_+-(p).
inline Complex band_hamiltonian(double q, double p, double F, double gamma, Band band) {
  return F * q + band_energy(p, gamma, band);
}

/// Derivatives of E_band(p): first and second, real and imaginary parts.
struct BandDerivatives {
  double re1 = 0.0, re2 = 0.0, im1 = 0.0, im2 = 0.0;
};

inline BandDerivatives band_derivatives(double p, double gamma, Band band) {
  const double sgn = band == Band::plus ? 1.0 : -1.0;
  const double c = std::cos(p);
  const double R = 4.0 * c * c - gamma * gamma;
  const double R1 = -4.0 * std::sin(2.0 * p);
  const double R2 = -8.0 * std::cos(2.0 * p);
  BandDerivatives d;
  if (R > 0.0) {
    const double S = std::sqrt(R);
    d.re1 = sgn * R1 / (2.0 * S);
    d.re2 = sgn * (R2 / (2.0 * S) - R1 * R1 / (4.0 * S * S * S));
  } else if (R < 0.0) {
    const double S = std::sqrt(-R);
    d.im1 = sgn * (-R1 / (2.0 * S));
    d.im2 = sgn * (-R2 / (2.0 * S) - R1 * R1 / (4.0 * S * S * S));
  } else {
    const double inf = std::numeric_limits<double>::infinity();
    d.re1 = d.re2 = d.im1 = d.im2 = inf;
  }
  return d;
}

/// Distance from p to the nearest point with 2|cos p| = gamma (infinite if none).
inline double distance_to_ep(double p, double gamma) {
  const std::vector<double> eps = exceptional_points_linear(gamma);
  double best = std::numeric_limits<double>::infinity();
  const double pf = std::remainder(p, 2.0 * pi);
  for (double k : eps)
    for (int w = -1; w <= 1; ++w) best = std::min(best, std::abs(pf - k - 2.0 * pi * w));
  return best;
}

inline double nearest_ep(double p, double gamma) {
  const std::vector<double> eps = exceptional_points_linear(gamma);
  double best = std::numeric_limits<double>::infinity(), at = 0.0;
  const double pf = std::remainder(p, 2.0 * pi);
  for (double k : eps)
    for (int w = -1; w <= 1; ++w) {
      const double d = std::abs(pf - k - 2.0 * pi * w);
      if (d < best) {
        best = d;
        at = p - (pf - k - 2.0 * pi * w);
      }
    }
  return at;
}

struct SemiclassicalOptions {
  ode::Options ode{1e-10, 1e-12};
  double ep_window = 1e-7;  // half width of the bridged neighbourhood in p
};

namespace detail {

struct SemiclassicalRhs {
  double F, gamma;
  const Band* band;
  void operator()(double, const RealVector& y, RealVector& dy) const {
    const BandDerivatives d = band_derivatives(y(1), gamma, *band);
    const double sqq = y(2), sqp = y(3), spp = y(4);
    dy.resize(5);
    dy(0) = d.re1 + sqp * d.im1;
    dy(1) = -F + spp * d.im1;
    dy(2) = 2.0 * d.re2 * sqp + d.im2 * (sqp * sqp - 1.0);
    dy(3) = d.re2 * spp + d.im2 * sqp * spp;
    dy(4) = d.im2 * spp * spp;
  }
};

inline PhaseSpaceState to_state(const RealVector& y, Band band, double t) {
  return {y(0), y(1), y(2), y(3), y(4), band, t};
}

[[noreturn]] inline void ep_failure(double t, const std::string& why) {
  std::ostringstream os;
  os.precision(17);
  os << "EP crossing failed (" << why << ") at t=" << t;
  throw NumericError(os.str());
}

}  // namespace detail

/// Single-band packet dynamics with the covariance flow; EP neighbourhoods
/// are bridged with continuous (q, Sigma). At gamma = 0 the crossing at
/// cos p = 0 follows the analytic band -2cos p, i.e. the label swaps.
inline std::vector<PhaseSpaceState> evolve_semiclassical(const PhaseSpaceState& init, double F,
                                                         double gamma, double t_final,
                                                         double dt_out,
                                                         const SemiclassicalOptions& opt = {}) {
  if (std::abs(init.det() - 1.0) > 1e-12) throw PreconditionError("det Sigma(0) must be 1");
  if (!(init.s_qq > 0.0) || !(init.s_pp >= 0.0)) throw PreconditionError("invalid covariance");
  if (!(t_final > 0.0) || !(dt_out > 0.0)) throw ParameterError("t_final and dt_out must be positive");
  if (!(gamma >= 0.0)) throw ParameterError("gamma must be >= 0");

  Band band = init.band;
  detail::SemiclassicalRhs rhs{F, gamma, &band};
  RealVector y(5);
  y << init.q, init.p, init.s_qq, init.s_qp, init.s_pp;
  const double t0 = init.time, t1 = init.time + t_final;
  const auto n_out = static_cast<std::size_t>(std::floor(t_final / dt_out * (1.0 + 1e-12)));
  std::vector<PhaseSpaceState> out;
  out.push_back(detail::to_state(y, band, t0));
  std::size_t next = 1;
  auto ts = [&](std::size_t n) { return std::min(t0 + static_cast<double>(n) * dt_out, t1); };

  ode::Dopri5<RealVector, detail::SemiclassicalRhs> solver(rhs, y, t0, opt.ode);
  const double window = opt.ep_window;
  int bridges_here = 0;
  while (solver.time() < t1) {
    const RealVector& cur = solver.state();
    const double d = distance_to_ep(cur(1), gamma);
    RealVector dcur(5);
    rhs(solver.time(), cur, dcur);
    if (d < window) {
      // bridge across the exceptional point
      const double pdot = dcur(1);
      const double dir = std::isfinite(pdot) && pdot != 0.0 ? (pdot > 0 ? 1.0 : -1.0) : (F > 0 ? -1.0 : 1.0);
      if (++bridges_here > 2) detail::ep_failure(solver.time(), "trajectory trapped at the EP");
      const double pe = nearest_ep(cur(1), gamma);
      const double pn = pe + dir * 2.0 * window;
      const double speed = std::max(std::abs(F), 1e-300);
      const double dt = std::abs(pn - cur(1)) / speed;
      RealVector yn = cur;
      const Band nb = gamma == 0.0 ? (band == Band::plus ? Band::minus : Band::plus) : band;
      const Complex e0 = band_energy(cur(1), gamma, band);
      const Complex e1 = band_energy(pn, gamma, nb);
      yn(0) += ((e1.real() - e0.real()) + cur(3) * (e1.imag() - e0.imag())) / (dir * speed);
      yn(1) = pn;
      const double tn = solver.time() + dt;
      while (next <= n_out && ts(next) <= tn) {
        const bool before = ts(next) < tn - dt / 2;
        out.push_back(detail::to_state(before ? cur : yn, before ? band : nb, ts(next)));
        ++next;
      }
      band = nb;
      if (tn >= t1) {
        if (next <= n_out) out.push_back(detail::to_state(yn, band, t1));
        return out;
      }
      solver.reset(tn, yn);
      RealVector dn(5);
      rhs(tn, yn, dn);
      if (!(std::isfinite(dn(1))) || dn(1) * dir < 0.0)
        detail::ep_failure(tn, "momentum reversed after the EP");
      continue;
    }
    bridges_here = 0;
    const double pspeed = std::abs(dcur(1));
    solver.set_max_step(pspeed > 0.0 && std::isfinite(pspeed) ? 0.5 * (d - 0.5 * window) / pspeed
                                                               : std::numeric_limits<double>::infinity());
    try {
      solver.step(t1);
    } catch (const NumericError& e) {
      detail::ep_failure(solver.time(), e.what());
    }
    const double slack = solver.time() >= t1 ? 1e-12 * std::max(1.0, std::abs(t1)) : 0.0;
    while (next <= n_out && ts(next) <= solver.time() + slack) {
      out.push_back(detail::to_state(solver.interpolate(ts(next)), band, ts(next)));
      ++next;
    }
  }
  if (out.back().time < t1 - 1e-9 * std::max(1.0, t1))
    out.push_back(detail::to_state(solver.state(), band, t1));
  return out;
}

/// P = 1 / (2 - exp(-pi gamma^2 / 2F)).
inline double landau_zener_probability(double F, double gamma) {
  if (!(F > 0.0)) throw ParameterError("F must be positive");
  return 1.0 / (2.0 - std::exp(-pi * gamma * gamma / (2.0 * F)));
}

/// Band weights and band-resolved centres at one time.
struct BandResolvedSample {
  double t = 0.0;
  double weight_plus = 0.0, weight_minus = 0.0;
  double q_plus = 0.0, q_minus = 0.0;
};

inline BandResolvedSample band_resolved(double t, const ComplexVector& psi, double gamma) {
  const BandComponents bc = decompose_bands(psi, gamma);
  BandResolvedSample s;
  s.t = t;
  s.weight_plus = bc.weight_plus();
  s.weight_minus = bc.weight_minus();
  s.q_plus = centre_of_mass(bc.plus.cwiseAbs2());
  s.q_minus = centre_of_mass(bc.minus.cwiseAbs2());
  return s;
}

/// Projects the packet onto the minus band, propagates half a Bloch period
/// (p: k0 -> k0 - pi, through the broken region) and returns the fraction
/// found in the plus band.
inline double measure_band_transfer(const LatticeSpec& spec, const GaussianPacketSpec& packet,
                                    const ode::Options& opt = propagator_options()) {
  const double gamma = uniform_gamma(spec);
  if (!(gamma < 2.0)) throw ParameterError("band transfer needs gamma < 2");
  const double F = spec.tilt();
  const WaveFunction g = make_gaussian(spec, packet);
  const WaveFunction psi0 = normalized(decompose_bands(g.amplitudes, gamma).minus);
  const double th = pi / F;
  const DensityTrace tr = evolve_single_particle(spec, psi0, th, th, opt);
  const BandComponents bc = decompose_bands(tr.trajectory.back(), gamma);
  return bc.weight_plus() / (bc.weight_plus() + bc.weight_minus());
}

}  // namespace lossychain

#endif  // LOSSYCHAIN_SEMICLASSICS_HPP
