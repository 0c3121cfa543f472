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

#ifndef LOSSYCHAIN_BANDS_HPP
#define LOSSYCHAIN_BANDS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "core.hpp"

namespace lossychain {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

enum class Band { plus, minus };

inline std::string to_string(Band b) { return b == Band::plus ? "plus" : "minus"; }

struct BandPoint {
  double k = 0.0;
  Complex E_plus;
  Complex E_minus;
};

/// h(k) = [[-2cos k - i gamma, i gamma], [i gamma, 2cos k - i gamma]].
inline Matrix2c bloch_hamiltonian(double k, double gamma) {
  const double c = std::cos(k);
  Matrix2c h;
  h << Complex(-2.0 * c, -gamma), Complex(0.0, gamma), Complex(0.0, gamma),
      Complex(2.0 * c, -gamma);
  return h;
}

/// sqrt of a real radicand, imaginary when negative.
inline Complex real_radicand_sqrt(double r) {
  return r >= 0.0 ? Complex(std::sqrt(r), 0.0) : Complex(0.0, std::sqrt(-r));
}

/// E_+- = -i gamma +- sqrt(4cos^2 k - gamma^2).
inline BandPoint dispersion(double k, double gamma) {
  const double c = std::cos(k);
  const Complex s = real_radicand_sqrt(4.0 * c * c - gamma * gamma);
  return {k, Complex(0.0, -gamma) + s, Complex(0.0, -gamma) - s};
}

inline Complex band_energy(double k, double gamma, Band b) {
  const BandPoint bp = dispersion(k, gamma);
  return b == Band::plus ? bp.E_plus : bp.E_minus;
}

/// All k in [-pi, pi] with 2|cos k| = gamma, ascending.
inline std::vector<double> exceptional_points_linear(double gamma) {
  if (!(gamma >= 0.0)) throw ParameterError("gamma must be >= 0");
  std::vector<double> ks;
  if (gamma > 2.0) return ks;
  if (gamma == 2.0) return {-pi, 0.0, pi};
  const double a = std::acos(gamma / 2.0);
  ks = {-pi + a, -a, a, pi - a};
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

/// Right eigenvectors of h(k) as columns (plus, minus) and the
/// biorthonormal left eigenvectors as rows of the inverse.
struct BandBasis {
  Matrix2c right;
  Matrix2c left;
};

inline BandBasis band_basis(double k, double gamma) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double kk = k + attempt * 1e-9;
    const BandPoint bp = dispersion(kk, gamma);
    const Matrix2c h = bloch_hamiltonian(kk, gamma);
    Matrix2c R;
    const Complex E[2] = {bp.E_plus, bp.E_minus};
    for (int b = 0; b < 2; ++b) {
      Eigen::Vector2cd v(h(0, 1), E[b] - h(0, 0));
      if (v.norm() < 1e-14) v = Eigen::Vector2cd(E[b] - h(1, 1), h(1, 0));
      if (v.norm() < 1e-14) v = (b == 0) ? Eigen::Vector2cd(0, 1) : Eigen::Vector2cd(1, 0);
      R.col(b) = v / v.norm();
    }
    if (std::abs(R.determinant()) > 1e-10) return {R, R.inverse()};
  }
  throw NumericError("band basis singular at an exceptional point");
}

/// Half-offset quasimomentum grid k_n = -pi + 2 pi (n + 1/2) / Nk.
inline std::vector<double> half_offset_k_grid(int Nk) {
  std::vector<double> ks(static_cast<std::size_t>(Nk));
  for (int n = 0; n < Nk; ++n) ks[static_cast<std::size_t>(n)] = -pi + 2.0 * pi * (n + 0.5) / Nk;
  return ks;
}

/// Splits a lattice state into its plus- and minus-band parts (site space).
struct BandComponents {
  ComplexVector plus;
  ComplexVector minus;
  double weight_plus() const { return plus.squaredNorm(); }
  double weight_minus() const { return minus.squaredNorm(); }
};

inline BandComponents decompose_bands(const ComplexVector& psi, double gamma, int Nk = 0) {
  const int M = static_cast<int>(psi.size());
  if (M % 2 == 0) throw ParameterError("lattice state must have odd length");
  const int L = (M - 1) / 2;
  if (Nk <= 0) Nk = 4 * M;
  const std::vector<double> ks = half_offset_k_grid(Nk);
  BandComponents out{ComplexVector::Zero(M), ComplexVector::Zero(M)};
  std::vector<Complex> cp(ks.size()), cm(ks.size());
  for (std::size_t n = 0; n < ks.size(); ++n) {
    const double k = ks[n];
    Complex p1 = 0.0, p2 = 0.0;
    for (int j = -L; j <= L; ++j) {
      const Complex e = std::polar(1.0, -k * j) * psi(j + L);
      p1 += e;
      p2 += (j % 2 == 0) ? e : -e;
    }
    const BandBasis bb = band_basis(k, gamma);
    const Eigen::Vector2cd a = bb.left * Eigen::Vector2cd(p1, p2);
    cp[n] = a(0) * bb.right(0, 0);
    cm[n] = a(1) * bb.right(0, 1);
  }
  for (int j = -L; j <= L; ++j) {
    Complex sp = 0.0, sm = 0.0;
    for (std::size_t n = 0; n < ks.size(); ++n) {
      const Complex e = std::polar(1.0, ks[n] * j);
      sp += e * cp[n];
      sm += e * cm[n];
    }
    out.plus(j + L) = sp / static_cast<double>(Nk);
    out.minus(j + L) = sm / static_cast<double>(Nk);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nonlinear Bloch bands

enum class Family { balanced, imbalanced };
enum class EpClass { none, EP2, EP3 };

inline std::string to_string(Family f) { return f == Family::balanced ? "balanced" : "imbalanced"; }
inline std::string to_string(EpClass e) {
  switch (e) {
    case EpClass::EP2: return "EP2";
    case EpClass::EP3: return "EP3";
    default: return "none";
  }
}

struct NonlinearSolution {
  double z = 0.0;
  double v = 0.0;
  Complex A, B;
  Complex mu;
  Family family = Family::balanced;
  std::string branch;  // minus/plus (balanced), zpos/zneg (imbalanced)
  EpClass ep_class = EpClass::none;
};

struct NonlinearBandPoint {
  double k = 0.0;
  std::vector<NonlinearSolution> solutions;
};

inline constexpr double ep_tolerance = 1e-12;

inline std::pair<Complex, Complex> amplitudes(double z, double v) {
  return {std::sqrt((1.0 + z) / 2.0) * std::polar(1.0, -v),
          std::sqrt(std::max(0.0, (1.0 - z) / 2.0)) * std::polar(1.0, v)};
}

/// [[g|A|^2, -2cos k], [-2cos k, g|B|^2 - 2i gamma]]
inline Matrix2c nonlinear_two_level(Complex A, Complex B, double k, double g, double gamma) {
  const double c = std::cos(k);
  Matrix2c H;
  H << g * std::norm(A), -2.0 * c, -2.0 * c, Complex(g * std::norm(B), -2.0 * gamma);
  return H;
}

inline double stationary_residual(const NonlinearSolution& s, double k, double g, double gamma) {
  const Eigen::Vector2cd chi(s.A, s.B);
  return (nonlinear_two_level(s.A, s.B, k, g, gamma) * chi - s.mu * chi).norm();
}

inline double z_polynomial_residual(double z, double k, double g, double gamma) {
  const double c = g / 2.0;
  const double ck = std::cos(k);
  const double z2 = z * z;
  return std::abs((c * c + gamma * gamma) * z2 * z2 + (4.0 * ck * ck - c * c - gamma * gamma) * z2);
}

namespace detail {

inline NonlinearSolution make_solution(double z, double v, Complex mu, Family f,
                                       std::string branch, EpClass ep) {
  NonlinearSolution s;
  s.z = z;
  s.v = v;
  std::tie(s.A, s.B) = amplitudes(z, v);
  s.mu = mu;
  s.family = f;
  s.branch = std::move(branch);
  s.ep_class = ep;
  return s;
}

}  // namespace detail

/// Stationary states (A, B) e^{ikj} of the lossy DNLS at quasimomentum k.
inline NonlinearBandPoint nonlinear_bloch_point(double k, double g, double gamma) {
  if (!(g >= 0.0)) throw ParameterError("g must be >= 0");
  if (!(gamma >= 0.0)) throw ParameterError("gamma must be >= 0");
  NonlinearBandPoint out;
  out.k = k;
  const double c = g / 2.0;
  const double ck = std::cos(k);
  const double s = ck >= 0.0 ? 1.0 : -1.0;
  const double two_abs_cos = 2.0 * std::abs(ck);
  const double rho = std::hypot(c, gamma);
  auto& sol = out.solutions;

  if (std::abs(ck) < 1e-15) {
    sol.push_back(detail::make_solution(1.0, 0.0, Complex(g, 0.0), Family::imbalanced, "zpos",
                                        EpClass::none));
    sol.push_back(detail::make_solution(-1.0, 0.0, Complex(g, -2.0 * gamma), Family::imbalanced,
                                        "zneg", EpClass::none));
    return out;
  }

  const bool balanced_ep = gamma > 0.0 && std::abs(two_abs_cos - gamma) < ep_tolerance;
  const bool imbalanced_ep = c > 0.0 && std::abs(two_abs_cos - rho) < ep_tolerance;
  const bool balanced_exists = balanced_ep || two_abs_cos > gamma;
  const bool imbalanced_exists = rho > 0.0 && (imbalanced_ep || two_abs_cos < rho);
  const double v_imb = 0.5 * std::atan2(gamma * s, -c * s);

  if (balanced_exists) {
    // sin 2v = gamma / 2cos k, cos 2v = r / 2|cos k|
    const double r = std::sqrt(std::max(0.0, (two_abs_cos - gamma) * (two_abs_cos + gamma)));
    const double v = 0.5 * std::atan2(s * gamma, r);
    if (balanced_ep) {
      sol.push_back(detail::make_solution(0.0, v, Complex(c - s * r, -gamma), Family::balanced, "ep",
                                          EpClass::EP2));
    } else {
      const bool minus_joins = imbalanced_ep && s < 0.0;
      const bool plus_joins = imbalanced_ep && s > 0.0;
      sol.push_back(detail::make_solution(0.0, v, Complex(-s * r + c, -gamma), Family::balanced,
                                          "minus", minus_joins ? EpClass::EP3 : EpClass::none));
      sol.push_back(detail::make_solution(0.0, pi / 2.0 - v, Complex(s * r + c, -gamma),
                                          Family::balanced, "plus",
                                          plus_joins ? EpClass::EP3 : EpClass::none));
    }
  }
  // at the imbalanced threshold both z coalesce into a balanced solution
  if (imbalanced_exists && !imbalanced_ep && !(balanced_ep && c == 0.0)) {
    const double z = std::sqrt(std::max(0.0, 1.0 - 4.0 * ck * ck / (rho * rho)));
    if (z == 0.0) {
      sol.push_back(detail::make_solution(0.0, v_imb, Complex(2.0 * c, -gamma), Family::imbalanced,
                                          "zpos", EpClass::none));
    } else {
      sol.push_back(detail::make_solution(z, v_imb, Complex(2.0 * c, gamma * (z - 1.0)),
                                          Family::imbalanced, "zpos", EpClass::none));
      sol.push_back(detail::make_solution(-z, v_imb, Complex(2.0 * c, gamma * (-z - 1.0)),
                                          Family::imbalanced, "zneg", EpClass::none));
    }
  }
  return out;
}

/// k values (within [-pi, pi]) where 2|cos k| equals x.
inline std::vector<double> abscissae_of_two_abs_cos(double x) {
  std::vector<double> ks;
  if (x < 0.0 || x > 2.0) return ks;
  const double a = std::acos(x / 2.0);
  ks = {-pi + a, -a, a, pi - a};
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

/// Evaluates the grid plus the exact exceptional abscissae, sorted by k.
inline std::vector<NonlinearBandPoint> nonlinear_band_sweep(double g, double gamma,
                                                            std::vector<double> k_grid) {
  for (double k : k_grid)
    if (k < -pi - 1e-12 || k > pi + 1e-12) throw ParameterError("k grid outside [-pi, pi]");
  const double c = g / 2.0;
  if (gamma > 0.0)
    for (double k : abscissae_of_two_abs_cos(gamma)) k_grid.push_back(k);
  if (c > 0.0)
    for (double k : abscissae_of_two_abs_cos(std::hypot(c, gamma))) k_grid.push_back(k);
  std::sort(k_grid.begin(), k_grid.end());
  k_grid.erase(std::unique(k_grid.begin(), k_grid.end()), k_grid.end());
  std::vector<NonlinearBandPoint> out;
  out.reserve(k_grid.size());
  for (double k : k_grid) out.push_back(nonlinear_bloch_point(k, g, gamma));
  return out;
}

inline std::vector<double> uniform_k_grid(int nk) {
  if (nk < 2) throw ParameterError("nk must be >= 2");
  std::vector<double> ks(static_cast<std::size_t>(nk));
  for (int n = 0; n < nk; ++n) ks[static_cast<std::size_t>(n)] = -pi + 2.0 * pi * n / (nk - 1);
  return ks;
}

// ---------------------------------------------------------------------------
// Bogoliubov-de Gennes stability

struct StabilitySpectrum {
  std::array<Complex, 4> omegas;
  double max_im = 0.0;
  bool stable = true;
};

inline constexpr double stationary_tolerance = 1e-10;
inline constexpr double stability_tolerance = 1e-10;

inline Matrix4c bdg_matrix(const NonlinearSolution& sol, double k, double g, double gamma) {
  if (!(stationary_residual(sol, k, g, gamma) < stationary_tolerance))
    throw PreconditionError("stationary residual bound violated");
  const double c = g / 2.0;
  const Complex A = sol.A, B = sol.B;
  const Complex Ab = std::conj(A), Bb = std::conj(B);
  const Matrix2c H0 = nonlinear_two_level(A, B, k, g, gamma);
  Matrix2c P;
  P << 1.0 - std::norm(A), -A * Bb, -Ab * B, 1.0 - std::norm(B);
  const Matrix2c Pb = P.conjugate();
  Matrix2c Q1, Q2, Q3, Q4;
  Q1 << std::norm(A), -A * Bb, -Ab * B, std::norm(B);
  Q2 << A * A, -A * B, -A * B, B * B;
  Q3 << Ab * Ab, -Ab * Bb, -Ab * Bb, Bb * Bb;
  Q4 << std::norm(A), -Ab * B, -A * Bb, std::norm(B);
  const Matrix2c Id = Matrix2c::Identity();
  Matrix4c M;
  M.topLeftCorner<2, 2>() = H0 - sol.mu * Id + c * P * Q1 * P;
  M.topRightCorner<2, 2>() = c * P * Q2 * Pb;
  M.bottomLeftCorner<2, 2>() = -c * Pb * Q3 * P;
  M.bottomRightCorner<2, 2>() = -H0.conjugate() + std::conj(sol.mu) * Id - c * Pb * Q4 * Pb;
  return M;
}

inline StabilitySpectrum stability_spectrum(const NonlinearSolution& sol, double k, double g,
                                            double gamma, double tol = stability_tolerance) {
  const Matrix4c M = bdg_matrix(sol, k, g, gamma);
  Eigen::ComplexEigenSolver<Matrix4c> es(M, false);
  if (es.info() != Eigen::Success) throw NumericError("BdG eigensolve failed");
  StabilitySpectrum out;
  out.max_im = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    out.omegas[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    out.max_im = std::max(out.max_im, es.eigenvalues()(i).imag());
  }
  out.stable = out.max_im <= tol;
  return out;
}

}  // namespace lossychain

#endif  // LOSSYCHAIN_BANDS_HPP
