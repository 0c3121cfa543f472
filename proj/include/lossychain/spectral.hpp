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

#ifndef LOSSYCHAIN_SPECTRAL_HPP
#define LOSSYCHAIN_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <vector>

#include "core.hpp"
#include "lattice.hpp"

namespace lossychain {

/// Two interleaved ladders E_{0,n} = 2nF + i Im(lambda),
/// E_{1,n} = (2n+1)F - i Im(lambda) - 2i gamma.
struct LadderSpectrum {
  double im_lambda = 0.0;
  std::vector<Complex> ladder0;
  std::vector<Complex> ladder1;
  std::vector<Complex> raw_converged;
  std::vector<int> labels;  // ladder of each raw_converged entry (0 or 1)
  double max_re_residual = 0.0;
  double max_im_spread = 0.0;
};

inline std::vector<Complex> eigenvalues(const ComplexMatrix& H) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(H, false);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver failed to converge");
  const auto& ev = es.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}


/// Eigenvalues of H_eff(L_large) matched (greedily, nearest first) to an
/// eigenvalue of H_eff(L_small) within tol and inside |Re E| <= F L_small / 2.
inline std::vector<Complex> converged_spectrum(const LatticeSpec& spec, int L_small,
                                               int L_large, double tol) {
  if (!(L_small < L_large) || L_small < 0) throw ParameterError("need 0 <= L_small < L_large");
  if (!(tol > 0.0)) throw ParameterError("tol must be positive");
  const double F = spec.tilt();
  const double gamma = uniform_gamma(spec);
  auto solve = [F, gamma](int L) {
    return eigenvalues(build_effective_hamiltonian(LatticeSpec::uniform(L, F, gamma)));
  };
  auto small_f = std::async(std::launch::async, solve, L_small);
  std::vector<Complex> large = solve(L_large);
  std::vector<Complex> small = small_f.get();

  const double window = F * L_small / 2.0;
  std::vector<Complex> cand;
  for (const Complex& e : large)
    if (std::abs(e.real()) <= window) cand.push_back(e);
  std::sort(cand.begin(), cand.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  // all admissible pairs, closest first
  struct Pair {
    double d;
    std::size_t a, b;
  };
  std::vector<Pair> pairs;
  for (std::size_t a = 0; a < cand.size(); ++a)
    for (std::size_t b = 0; b < small.size(); ++b) {
      const double d = std::abs(cand[a] - small[b]);
      if (d <= tol) pairs.push_back({d, a, b});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    return x.d != y.d ? x.d < y.d : (x.a != y.a ? x.a < y.a : x.b < y.b);
  });
  std::vector<char> used_a(cand.size(), 0), used_b(small.size(), 0);
  for (const Pair& p : pairs) {
    if (used_a[p.a] || used_b[p.b]) continue;
    used_a[p.a] = used_b[p.b] = 1;
  }
  std::vector<Complex> out;
  for (std::size_t a = 0; a < cand.size(); ++a)
    if (used_a[a]) out.push_back(cand[a]);
  return out;
}

/// Splits the imaginary parts into at most two levels and assigns ladders by
/// the parity of round(Re E / F).
inline LadderSpectrum extract_ladders(const std::vector<Complex>& eigs, double F, double gamma,
                                      double tol) {
  if (!(F > 0.0)) throw ParameterError("F must be positive");
  if (eigs.empty()) throw ParameterError("eigenvalue list is empty");
  if (!(tol > 0.0)) throw ParameterError("tol must be positive");

  std::vector<double> im;
  for (const Complex& e : eigs) im.push_back(e.imag());
  std::vector<double> sorted = im;
  std::sort(sorted.begin(), sorted.end());

  // 1-D two-means: exact optimum over split positions of the sorted data
  double split = std::numeric_limits<double>::infinity();
  if (sorted.back() - sorted.front() > tol) {
    const std::size_t n = sorted.size();
    std::vector<double> pre(n + 1, 0.0), pre2(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      pre[i + 1] = pre[i] + sorted[i];
      pre2[i + 1] = pre2[i] + sorted[i] * sorted[i];
    }
    auto sse = [&](std::size_t lo, std::size_t hi) {
      const double m = static_cast<double>(hi - lo);
      const double s = pre[hi] - pre[lo];
      return (pre2[hi] - pre2[lo]) - s * s / m;
    };
    double best = std::numeric_limits<double>::infinity();
    std::size_t cut = 1;
    for (std::size_t i = 1; i < n; ++i) {
      const double v = sse(0, i) + sse(i, n);
      if (v < best) {
        best = v;
        cut = i;
      }
    }
    if (sorted[cut - 1] - sorted.front() > tol || sorted.back() - sorted[cut] > tol)
      throw StructureError("ladder structure not found");
    split = 0.5 * (sorted[cut - 1] + sorted[cut]);
  }

  LadderSpectrum out;
  out.raw_converged = eigs;
  double sum[2] = {0.0, 0.0};
  int count[2] = {0, 0};
  double lo_[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  double hi_[2] = {-lo_[0], -lo_[1]};
  int cluster_of_ladder[2] = {-1, -1};
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    const double r = eigs[i].real() / F;
    const double n = std::nearbyint(r);
    out.max_re_residual = std::max(out.max_re_residual, std::abs(eigs[i].real() - n * F));
    const int lad = (static_cast<long long>(n) % 2 == 0) ? 0 : 1;
    const int cl = im[i] > split ? 1 : 0;
    if (cluster_of_ladder[lad] < 0) cluster_of_ladder[lad] = cl;
    else if (cluster_of_ladder[lad] != cl && split != std::numeric_limits<double>::infinity())
      throw StructureError("ladder structure not found");
    out.labels.push_back(lad);
    sum[lad] += im[i];
    ++count[lad];
    lo_[lad] = std::min(lo_[lad], im[i]);
    hi_[lad] = std::max(hi_[lad], im[i]);
  }
  if (out.max_re_residual >= tol) throw StructureError("ladder structure not found");
  if (cluster_of_ladder[0] >= 0 && cluster_of_ladder[0] == cluster_of_ladder[1] &&
      split != std::numeric_limits<double>::infinity())
    throw StructureError("ladder structure not found");
  for (int l = 0; l < 2; ++l)
    if (count[l] > 0) out.max_im_spread = std::max(out.max_im_spread, hi_[l] - lo_[l]);

  const double im0 = count[0] ? sum[0] / count[0] : 0.0;
  const double im1 = count[1] ? sum[1] / count[1] : 0.0;
  if (count[0] && count[1] && std::abs(im0 + im1 + 2.0 * gamma) > tol)
    throw ConsistencyError("ladder pairing Im0 + Im1 = -2 gamma violated");
  out.im_lambda = count[0] ? im0 : -im1 - 2.0 * gamma;

  for (std::size_t i = 0; i < eigs.size(); ++i) {
    const long long n = static_cast<long long>(std::nearbyint(eigs[i].real() / F));
    if (out.labels[i] == 0) out.ladder0.emplace_back(static_cast<double>(n) * F, out.im_lambda);
    else out.ladder1.emplace_back(static_cast<double>(n) * F, -out.im_lambda - 2.0 * gamma);
  }
  auto by_re = [](Complex a, Complex b) { return a.real() < b.real(); };
  std::sort(out.ladder0.begin(), out.ladder0.end(), by_re);
  std::sort(out.ladder1.begin(), out.ladder1.end(), by_re);
  return out;
}

}  // namespace lossychain

#endif  // LOSSYCHAIN_SPECTRAL_HPP
