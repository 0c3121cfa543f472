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

// Acceptance run: one PASS/FAIL line per primary criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lossychain/app.hpp"

namespace lc = lossychain;
namespace fs = std::filesystem;
using lc::Complex;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x, int prec = 3) {
  char b[64];
  std::snprintf(b, sizeof b, "%.*g", prec, x);
  return b;
}

// ---------------------------------------------------------------------------

Outcome ladder_structure() {
  std::ostringstream os;
  bool pass = true;
  double worst_sum = 0.0, worst_re = 0.0, slowest = 0.0;
  int cases = 0;
  for (double F : {0.3, 1.0}) {
    for (double gamma : lc::config::to_sweep("gamma", "0:1:0.01")) {
      const auto t0 = Clock::now();
      const auto eigs = lc::converged_spectrum(lc::LatticeSpec::uniform(60, F, gamma), 50, 60, 1e-8);
      slowest = std::max(slowest, seconds_since(t0));
      ++cases;
      if (eigs.empty()) {
        pass = false;
        os << " no converged eigenvalues at F=" << F << " gamma=" << gamma << ";";
        continue;
      }
      // independent grouping: Im levels and ladder parities
      std::vector<double> levels;
      std::map<int, std::vector<double>> by_parity;
      for (const Complex& e : eigs) {
        const double n = std::nearbyint(e.real() / F);
        worst_re = std::max(worst_re, std::abs(e.real() - n * F));
        by_parity[static_cast<int>(std::abs(static_cast<long long>(n)) % 2)].push_back(e.imag());
        if (std::none_of(levels.begin(), levels.end(),
                         [&](double l) { return std::abs(l - e.imag()) <= 1e-6; }))
          levels.push_back(e.imag());
      }
      if (levels.size() > 2 || (gamma > 0.0 && levels.size() != 2)) {
        pass = false;
        os << " " << levels.size() << " Im levels at F=" << F << " gamma=" << gamma << ";";
      }
      if (by_parity.size() == 2) {
        auto mean = [](const std::vector<double>& v) {
          double s = 0.0;
          for (double x : v) s += x;
          return s / static_cast<double>(v.size());
        };
        worst_sum = std::max(worst_sum, std::abs(mean(by_parity[0]) + mean(by_parity[1]) + 2.0 * gamma));
      } else {
        pass = false;
        os << " single ladder parity at F=" << F << " gamma=" << gamma << ";";
      }
    }
  }
  pass = pass && worst_sum <= 1e-6 && worst_re <= 1e-6 && slowest < 60.0;
  os << " cases=" << cases << " max|Im0+Im1+2gamma|=" << num(worst_sum) << " max Re residual="
     << num(worst_re) << " slowest=" << num(slowest) << "s";
  return {pass, os.str()};
}

Outcome frequency_doubling() {
  const double F = 0.3, T = lc::bloch_period(F);
  const int ns = 64;
  auto corr = [&](double gamma) {
    const auto spec = lc::LatticeSpec::uniform(40, F, gamma);
    const auto tr = lc::evolve_single_particle(spec, lc::make_delta(spec, 0), 6.0 * T, T / ns);
    return lc::density_autocorrelation(tr, 3.0 * T, 6.0 * T, 2 * ns);
  };
  const auto c = corr(0.2), c0 = corr(0.0);
  const std::size_t h = ns / 2, f = ns;
  const bool local_max = c[h] >= c[h - 1] && c[h] >= c[h + 1];
  const double ratio = c[h] / c[f];
  // control: strongest peak in (0.1T, 1.2T) sits at T, and T/2 is not a comparable peak
  std::size_t arg = ns / 10;
  for (std::size_t l = ns / 10; l <= static_cast<std::size_t>(1.2 * ns); ++l)
    if (c0[l] > c0[arg]) arg = l;
  const double ratio0 = c0[h] / c0[f];
  const bool control = (arg + 1 >= f && arg <= f + 1) && ratio0 <= 0.95;
  const bool pass = local_max && ratio > 0.95 && control;
  return {pass, "C(T/2)/C(T)=" + num(ratio, 4) + (local_max ? " (local max)" : " (not a local max)") +
                    "; gamma=0 control C(T/2)/C(T)=" + num(ratio0, 4) + ", peak at lag " +
                    num(static_cast<double>(arg) / ns, 4) + "T"};
}

Outcome dispersion_and_eps() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> K(-lc::pi, lc::pi), G(0.0, 3.0);
  double worst = 0.0, worst_trace = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double k = K(rng), gamma = G(rng);
    const auto bp = lc::dispersion(k, gamma);
    // exact up to the rounding of the two summands
    const double scale = std::max(std::abs(bp.E_plus) + std::abs(bp.E_minus), 1e-300);
    worst_trace = std::max(worst_trace, std::abs(bp.E_plus + bp.E_minus + Complex(0.0, 2.0 * gamma)) /
                                            (std::numeric_limits<double>::epsilon() * scale));
    Eigen::ComplexEigenSolver<lc::Matrix2c> es(lc::bloch_hamiltonian(k, gamma), false);
    const Complex a = es.eigenvalues()(0), b = es.eigenvalues()(1);
    const double d = std::min(std::max(std::abs(a - bp.E_plus), std::abs(b - bp.E_minus)),
                              std::max(std::abs(a - bp.E_minus), std::abs(b - bp.E_plus)));
    worst = std::max(worst, d);
  }
  double worst_ep = 0.0;
  std::size_t n_ep = 0;
  for (double gamma : {0.05, 0.4, 1.0, 1.9}) {
    const auto eps = lc::exceptional_points_linear(gamma);
    n_ep += eps.size();
    for (double k : eps) {
      worst_ep = std::max(worst_ep, std::abs(2.0 * std::abs(std::cos(k)) - gamma));
      const auto bp = lc::dispersion(k, gamma);
      worst_ep = std::max(worst_ep, std::abs(bp.E_plus - bp.E_minus) * std::abs(bp.E_plus - bp.E_minus));
    }
  }
  const bool pass = worst_trace <= 4.0 && worst <= 1e-12 && worst_ep <= 1e-12 && n_ep == 16;
  return {pass, "trace identity max error=" + num(worst_trace) + " ulp; eigensolve vs closed form=" +
                    num(worst) + " over 1000 points; EPs found=" + std::to_string(n_ep) +
                    " max EP residual=" + num(worst_ep)};
}

Outcome beam_oscillation() {
  const double F = 0.2, gamma = 0.05, sigma = std::sqrt(20.0), T = lc::bloch_period(F);
  const int ns = 256;
  const double dk = 1.0 / (sigma * std::sqrt(2.0));
  const auto spec = lc::LatticeSpec::uniform(60, F, gamma);
  const auto tr = lc::evolve_single_particle(spec, lc::make_gaussian(spec, {0.0, 0.0, sigma}), T, T / ns);
  const double e0 = lc::dispersion(0.0, gamma).E_minus.real();
  const auto eps = lc::exceptional_points_linear(gamma);
  double worst = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const double t = tr.times[i], p = -F * t;
    double dist = lc::pi;
    for (double k : eps) {
      const double d = std::remainder(p - k, 2.0 * lc::pi);
      dist = std::min(dist, std::abs(d));
    }
    if (dist < 2.0 * dk) continue;
    const auto s = lc::band_resolved(t, tr.trajectory[i], gamma);
    const double tot = s.weight_plus + s.weight_minus;
    const auto bp = lc::dispersion(p, gamma);
    if (s.weight_plus / tot >= 0.1) {
      worst = std::max(worst, std::abs(s.q_plus - (e0 - bp.E_plus.real()) / F));
      ++used;
    }
    if (s.weight_minus / tot >= 0.1) {
      worst = std::max(worst, std::abs(s.q_minus - (e0 - bp.E_minus.real()) / F));
      ++used;
    }
  }

  auto amplitude = [&](const lc::LatticeSpec& sp) {
    const auto r = lc::evolve_single_particle(sp, lc::make_gaussian(sp, {0.0, 0.0, sigma}), T, T / 64);
    double lo = 1e300, hi = -1e300;
    for (Eigen::Index i = 0; i < r.renormalised_density.rows(); ++i) {
      const double q = lc::centre_of_mass(r.renormalised_density.row(i).transpose());
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    return hi - lo;
  };
  const double a_uniform = amplitude(spec);
  const double a_random = amplitude(lc::LatticeSpec::random_decay(60, F, 0.025, 0.125, 7));
  const double rel = std::abs(a_random - a_uniform) / a_uniform;
  const bool pass = used > 0 && worst <= 1.0 && rel <= 0.15;
  return {pass, "band centres vs Re E(p(0)-Ft)/F worst=" + num(worst) + " sites (" + std::to_string(used) +
                    " samples); amplitude uniform=" + num(a_uniform, 4) + " random=" + num(a_random, 4) +
                    " rel diff=" + num(rel)};
}

Outcome landau_zener() {
  bool pass = true;
  double worst = 0.0;
  std::ostringstream os;
  for (double F : {0.1, 0.2, 0.5}) {
    const int L = static_cast<int>(std::ceil(4.0 / F)) + 25;
    double prev = -1.0;
    for (double gamma : {0.05, 0.1, 0.2, 0.4}) {
      const double P = lc::landau_zener_probability(F, gamma);
      const double m = lc::measure_band_transfer(lc::LatticeSpec::uniform(L, F, gamma), {0.0, 0.0, std::sqrt(20.0)});
      const double rel = std::abs(m - P) / P;
      worst = std::max(worst, rel);
      if (rel > 0.2) pass = false;
      if (!(m < prev || prev < 0.0)) {
        pass = false;
        os << " non-monotone at F=" << F << " gamma=" << gamma << ";";
      }
      prev = m;
    }
  }
  os << " max relative error=" << num(worst) << " over 12 (F, gamma) pairs";
  return {pass, os.str()};
}

Outcome nonlinear_bands() {
  const double g = 2.0, gamma = 0.1, rho = std::hypot(g / 2.0, gamma);
  double worst_stat = 0.0, worst_poly = 0.0;
  bool counts = true, ep3 = false;
  for (const auto& pt : lc::nonlinear_band_sweep(g, gamma, lc::uniform_k_grid(801))) {
    for (const auto& s : pt.solutions) {
      worst_stat = std::max(worst_stat, lc::stationary_residual(s, pt.k, g, gamma));
      worst_poly = std::max(worst_poly, lc::z_polynomial_residual(s.z, pt.k, g, gamma));
      if (s.ep_class == lc::EpClass::EP3 && std::cos(pt.k) < 0.0 &&
          std::abs(2.0 * std::abs(std::cos(pt.k)) - rho) < 1e-12)
        ep3 = true;
    }
    const double x = 2.0 * std::abs(std::cos(pt.k));
    if (std::abs(x - gamma) > 1e-9 && std::abs(x - rho) > 1e-9) {
      const std::size_t expected = x < gamma ? 2 : (x < rho ? 4 : 2);
      if (pt.solutions.size() != expected) counts = false;
    }
  }
  bool quarter = true;
  for (double k : {lc::pi / 2, -lc::pi / 2}) {
    const auto pt = lc::nonlinear_bloch_point(k, g, gamma);
    quarter = quarter && pt.solutions.size() == 2 && pt.solutions[0].z == 1.0 &&
              pt.solutions[0].mu == Complex(g, 0.0) && pt.solutions[1].z == -1.0 &&
              std::abs(pt.solutions[1].mu - Complex(g, -2.0 * gamma)) <= 1e-15;
  }
  const bool pass = worst_stat < 1e-10 && worst_poly < 1e-12 && counts && quarter && ep3;
  return {pass, "stationary residual=" + num(worst_stat) + " z-polynomial residual=" + num(worst_poly) +
                    "; region counts " + (counts ? "ok" : "wrong") + "; k=+-pi/2 " +
                    (quarter ? "exact" : "wrong") + "; EP3 at cos k<0 " + (ep3 ? "found" : "missing")};
}

Outcome bdg_stability() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> K(-lc::pi, lc::pi), G(0.0, 8.0), Gm(0.0, 0.5);
  double worst = 0.0;
  int checked = 0;
  while (checked < 1000) {
    const double k = K(rng), g = G(rng), gamma = Gm(rng);
    if (2.0 * std::abs(std::cos(k)) <= gamma + 1e-6) continue;
    for (const auto& s : lc::nonlinear_bloch_point(k, g, gamma).solutions) {
      if (s.family != lc::Family::balanced) continue;
      // roots of the characteristic polynomial: 0, 0, +-2 sqrt(r^2 -+ sgn(cos k) c r)
      const double ck = std::cos(k), c = g / 2.0, sg = ck >= 0.0 ? 1.0 : -1.0;
      const double r = std::sqrt(4.0 * ck * ck - gamma * gamma);
      const Complex w = 2.0 * std::sqrt(Complex(r * r + (s.branch == "plus" ? -1.0 : 1.0) * sg * c * r, 0.0));
      std::vector<Complex> roots{0.0, 0.0, w, -w};
      const auto st = lc::stability_spectrum(s, k, g, gamma);
      double d = 0.0;
      for (const Complex& om : st.omegas) {
        auto it = std::min_element(roots.begin(), roots.end(),
                                   [&](Complex a, Complex b) { return std::abs(a - om) < std::abs(b - om); });
        d = std::max(d, std::abs(*it - om));
        roots.erase(it);
      }
      worst = std::max(worst, d);
      ++checked;
    }
  }

  // threshold of the mu_+ solution for cos k > 0, by bisection on the verdict
  const double g = 2.0, gamma = 0.1, c = 1.0;
  auto plus_stable = [&](double k) {
    for (const auto& s : lc::nonlinear_bloch_point(k, g, gamma).solutions)
      if (s.family == lc::Family::balanced && s.branch == "plus")
        return lc::stability_spectrum(s, k, g, gamma).stable;
    throw lc::Error("no mu_+ solution");
  };
  const double k_exact = std::acos(std::sqrt(c * c + gamma * gamma) / 2.0);
  double lo = 0.1, hi = std::acos(gamma / 2.0) - 1e-6;  // stable at lo, unstable at hi
  const bool bracket = plus_stable(lo) && !plus_stable(hi);
  for (int i = 0; i < 80 && bracket; ++i) {
    const double mid = 0.5 * (lo + hi);
    (plus_stable(mid) ? lo : hi) = mid;
  }
  const double k_err = std::abs(0.5 * (lo + hi) - k_exact);

  const auto qp = lc::nonlinear_bloch_point(lc::pi / 2, g, gamma);
  const bool up_stable = lc::stability_spectrum(qp.solutions[0], lc::pi / 2, g, gamma).stable;
  const bool down_stable = lc::stability_spectrum(qp.solutions[1], lc::pi / 2, g, gamma).stable;
  const bool pass = worst <= 1e-8 && bracket && k_err <= 1e-6 && up_stable && !down_stable;
  return {pass, "omega vs characteristic roots=" + num(worst) + " over " + std::to_string(checked) +
                    " solutions; mu+ threshold k error=" + num(k_err) + "; k=pi/2 verdicts (1,0) " +
                    (up_stable ? "stable" : "unstable") + ", (0,1) " + (down_stable ? "stable" : "unstable")};
}

Outcome mean_field_focusing() {
  const double F = 0.2, gamma = 0.1, g = 7.0, T = lc::bloch_period(F);
  auto peak = [&](bool upper) {
    const auto spec = lc::LatticeSpec::uniform(60, F, gamma, g);
    const auto psi = lc::make_nonlinear_bloch_packet(spec, upper, 0.0, 0.0, std::sqrt(20.0));
    const auto tr = lc::evolve_mean_field(spec, psi, T, T / 64);
    return tr.renormalised_density.maxCoeff();
  };
  const double up = peak(true), down = peak(false);
  return {up > 0.5 && down < 0.2,
          "max renormalised site density over first period: upper=" + num(up, 4) + " (gate >0.5), lower=" +
              num(down, 4) + " (gate <0.2)"};
}

Outcome two_particle() {
  const auto t0 = Clock::now();
  const double F = 0.2, gamma = 0.1, T = lc::bloch_period(F), sigma = std::sqrt(20.0);
  const int L = 20, ns = 64;
  const lc::FockBasis basis(2 * L + 1, 2);
  bool pass = true;
  std::ostringstream os;
  double drift = 0.0, min_eig = 0.0, n_rise = 0.0;
  for (double U : {1.0, 7.0}) {
    const auto spec = lc::LatticeSpec::uniform(L, F, gamma, U);
    double width[2] = {0.0, 0.0};
    for (int upper = 0; upper < 2; ++upper) {
      const auto orb = lc::make_nonlinear_bloch_packet(spec, upper == 1, 0.0, 0.0, sigma);
      const auto bec = lc::make_bec_state(basis, orb.amplitudes, 2);
      const auto tr = lc::evolve_lindblad_pure_sector(spec, basis, bec.vector, 1.5 * T, T / ns, 2);
      for (std::size_t i = 0; i < tr.times.size(); ++i) {
        drift = std::max(drift, std::abs(tr.trace[i] - tr.trace.front()));
        min_eig = std::min(min_eig, tr.min_eigenvalue[i]);
        if (i > 0) n_rise = std::max(n_rise, tr.total_number[i] - tr.total_number[i - 1]);
      }
      width[upper] = lc::beam_width(tr.renormalised_density.row(3 * ns / 4).transpose());
    }
    const double ratio = width[1] / width[0];
    os << "U=" << U << " width ratio at 0.75T=" << num(ratio, 4) << "; ";
    if (U == 1.0 && !(ratio > 1.2)) pass = false;
  }

  // one particle in the same truncated space against the wavefunction propagator
  const auto spec1 = lc::LatticeSpec::uniform(L, F, gamma, 1.0);
  const auto psi = lc::make_gaussian(spec1, {0.0, 0.0, sigma});
  const auto bec1 = lc::make_bec_state(basis, psi.amplitudes, 1);
  const auto mb = lc::evolve_lindblad_pure_sector(spec1, basis, bec1.vector, T, T / ns, 1);
  const auto sp = lc::evolve_single_particle(lc::LatticeSpec::uniform(L, F, gamma), psi, T, T / ns);
  double reduction = 0.0;
  if (mb.times.size() != sp.times.size()) reduction = std::numeric_limits<double>::infinity();
  else
    reduction = (mb.site_density - sp.site_density).cwiseAbs().maxCoeff();
  const double elapsed = seconds_since(t0);
  pass = pass && drift < 1e-8 && min_eig >= -1e-8 && n_rise <= 0.0 && reduction <= 1e-8 && elapsed < 600.0;
  os << "trace drift=" << num(drift) << " min eigenvalue=" << num(min_eig) << " max <N> increase="
     << num(n_rise) << " one-particle reduction=" << num(reduction) << " runtime=" << num(elapsed) << "s";
  return {pass, os.str()};
}

Outcome manifest_regeneration() {
  const auto t0 = Clock::now();
  const fs::path root = fs::temp_directory_path() / "lossychain_acceptance_manifest";
  fs::remove_all(root);
  int panels = 0;
  std::ostringstream os;
  bool pass = true;
  for (const auto& fig : lc::app::figure_manifest()) {
    for (const auto& p : fig.panels) {
      auto cfg = lc::app::config_from_args(p.args);
      cfg.params["out_dir"] = (root / p.id).string();
      const auto r = lc::app::run(cfg);
      ++panels;
      if (r.exit_code != 0) {
        pass = false;
        os << p.id << " failed: " << r.error_record << "; ";
      }
    }
  }
  const double elapsed = seconds_since(t0);
  fs::remove_all(root);
  pass = pass && elapsed < 3600.0;
  os << panels << " panels in " << num(elapsed, 4) << "s";
  return {pass, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"ladder-structure", ladder_structure},
      {"frequency-doubling", frequency_doubling},
      {"dispersion-eps", dispersion_and_eps},
      {"beam-bloch-oscillation", beam_oscillation},
      {"landau-zener", landau_zener},
      {"nonlinear-bands", nonlinear_bands},
      {"bdg-stability", bdg_stability},
      {"mean-field-focusing", mean_field_focusing},
      {"two-particle-lindblad", two_particle},
      {"manifest-regeneration", manifest_regeneration},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
