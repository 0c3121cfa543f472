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

#ifndef LOSSYCHAIN_LATTICE_HPP
#define LOSSYCHAIN_LATTICE_HPP

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <utility>
#include <vector>

#include "core.hpp"

namespace lossychain {

/// Tilted chain with sites j = -L..L, per-site decay and an interaction
/// strength (g for mean field, U for the many-body engine).
class LatticeSpec {
 public:
  LatticeSpec() = default;

  LatticeSpec(int half_width, double tilt, std::vector<double> decay, double interaction = 0.0)
      : half_width_(half_width), tilt_(tilt), decay_(std::move(decay)),
        interaction_(interaction) {
    validate();
  }

  static LatticeSpec uniform(int half_width, double tilt, double gamma,
                             double interaction = 0.0) {
    if (half_width < 0) throw ParameterError("half_width must be >= 0");
    std::vector<double> d(static_cast<std::size_t>(2 * half_width + 1), gamma);
    return LatticeSpec(half_width, tilt, std::move(d), interaction);
  }

  /// Odd-site rates drawn uniformly from (lo, hi); even sites get 0.
  static LatticeSpec random_decay(int half_width, double tilt, double lo, double hi,
                                  std::uint64_t seed, double interaction = 0.0) {
    if (half_width < 0) throw ParameterError("half_width must be >= 0");
    if (!(lo >= 0.0) || !(hi > lo)) throw ParameterError("random decay needs 0 <= lo < hi");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> d(static_cast<std::size_t>(2 * half_width + 1), 0.0);
    for (int j = -half_width; j <= half_width; ++j)
      if (j % 2 != 0) d[static_cast<std::size_t>(j + half_width)] = dist(rng);
    return LatticeSpec(half_width, tilt, std::move(d), interaction);
  }

  int half_width() const { return half_width_; }
  int sites() const { return 2 * half_width_ + 1; }
  double tilt() const { return tilt_; }
  double interaction() const { return interaction_; }
  const std::vector<double>& decay() const { return decay_; }
  double decay_at(int j) const { return decay_.at(static_cast<std::size_t>(index(j))); }

  /// Matrix index of site j.
  int index(int j) const {
    if (std::abs(j) > half_width_) throw ParameterError("site outside lattice");
    return j + half_width_;
  }
  int site(int index) const { return index - half_width_; }

  /// Loss entry i*gamma_j*((-1)^j - 1) of the effective Hamiltonian.
  Complex loss_term(int j) const {
    return I * decay_at(j) * static_cast<double>(parity_sign(j) - 1);
  }

  LatticeSpec with_interaction(double g) const {
    LatticeSpec s = *this;
    s.interaction_ = g;
    return s;
  }

 private:
  void validate() const {
    if (half_width_ < 0) throw ParameterError("half_width must be >= 0");
    if (!(tilt_ >= 0.0) || !std::isfinite(tilt_)) throw ParameterError("tilt F must be >= 0");
    if (decay_.size() != static_cast<std::size_t>(2 * half_width_ + 1))
      throw ParameterError("decay vector must have length 2L+1");
    for (double g : decay_)
      if (!(g >= 0.0) || !std::isfinite(g)) throw ParameterError("decay rates must be >= 0");
    if (!std::isfinite(interaction_)) throw ParameterError("interaction must be finite");
  }

  int half_width_ = 0;
  double tilt_ = 0.0;
  std::vector<double> decay_{0.0};
  double interaction_ = 0.0;
};

/// The common odd-site rate; throws if the odd sites differ.
inline double uniform_gamma(const LatticeSpec& spec) {
  double g = -1.0;
  for (int j = -spec.half_width(); j <= spec.half_width(); ++j) {
    if (j % 2 == 0) continue;
    const double gj = spec.decay_at(j);
    if (g < 0.0) g = gj;
    else if (gj != g) throw ParameterError("uniform decay pattern required");
  }
  return g < 0.0 ? spec.decay().front() : g;
}

/// H[j,j+-1] = -1, H[j,j] = F j + i gamma_j ((-1)^j - 1); open boundaries.
inline ComplexMatrix build_effective_hamiltonian(const LatticeSpec& spec) {
  const int L = spec.half_width();
  const int M = spec.sites();
  ComplexMatrix H = ComplexMatrix::Zero(M, M);
  for (int j = -L; j <= L; ++j) {
    const int a = j + L;
    H(a, a) = spec.tilt() * j + spec.loss_term(j);
    if (a + 1 < M) H(a, a + 1) = H(a + 1, a) = -1.0;
  }
  return H;
}

/// X[-j, j] = (-1)^j.
inline ComplexMatrix build_chiral_operator(const LatticeSpec& spec) {
  const int L = spec.half_width();
  ComplexMatrix X = ComplexMatrix::Zero(spec.sites(), spec.sites());
  for (int j = -L; j <= L; ++j) X(-j + L, j + L) = static_cast<double>(parity_sign(j));
  return X;
}

/// S_m[j-m, j] = 1, truncated at the edges.
inline ComplexMatrix build_translation_operator(const LatticeSpec& spec, int m) {
  const int L = spec.half_width();
  if (std::abs(m) > 2 * L) throw ParameterError("translation |m| exceeds 2L");
  ComplexMatrix S = ComplexMatrix::Zero(spec.sites(), spec.sites());
  for (int j = -L; j <= L; ++j)
    if (std::abs(j - m) <= L) S(j - m + L, j + L) = 1.0;
  return S;
}

}  // namespace lossychain

#endif  // LOSSYCHAIN_LATTICE_HPP
