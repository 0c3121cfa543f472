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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lossychain/lattice.hpp"
#include "lossychain/spectral.hpp"

namespace lc = lossychain;
using lc::Complex;
using lc::ComplexMatrix;
using lc::LatticeSpec;

TEST(LatticeSpec, Validation) {
  EXPECT_THROW(LatticeSpec::uniform(-1, 0.3, 0.2), lc::ParameterError);
  EXPECT_THROW(LatticeSpec::uniform(3, -0.3, 0.2), lc::ParameterError);
  EXPECT_THROW(LatticeSpec::uniform(3, 0.3, -0.2), lc::ParameterError);
  const LatticeSpec s = LatticeSpec::uniform(3, 0.3, 0.2);
  EXPECT_EQ(s.sites(), 7);
  EXPECT_EQ(s.index(-3), 0);
  EXPECT_EQ(s.site(6), 3);
  EXPECT_DOUBLE_EQ(lc::uniform_gamma(s), 0.2);
}

TEST(LatticeSpec, RandomDecayIsSeededAndOddOnly) {
  const LatticeSpec a = LatticeSpec::random_decay(10, 0.2, 0.025, 0.125, 42);
  const LatticeSpec b = LatticeSpec::random_decay(10, 0.2, 0.025, 0.125, 42);
  const LatticeSpec c = LatticeSpec::random_decay(10, 0.2, 0.025, 0.125, 43);
  EXPECT_EQ(a.decay(), b.decay());
  EXPECT_NE(a.decay(), c.decay());
  for (int j = -10; j <= 10; ++j) {
    if (j % 2 == 0) {
      EXPECT_EQ(a.decay_at(j), 0.0);
    } else {
      EXPECT_GE(a.decay_at(j), 0.025);
      EXPECT_LT(a.decay_at(j), 0.125);
    }
  }
  EXPECT_THROW(lc::uniform_gamma(a), lc::ParameterError);
}

TEST(EffectiveHamiltonian, SmallLatticeEntries) {
  const ComplexMatrix H = lc::build_effective_hamiltonian(LatticeSpec::uniform(1, 0.3, 0.2));
  ASSERT_EQ(H.rows(), 3);
  EXPECT_NEAR(std::abs(H(0, 0) - Complex(-0.3, -0.4)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(H(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(H(2, 2) - Complex(0.3, -0.4)), 0.0, 1e-15);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (std::abs(a - b) == 1) EXPECT_EQ(H(a, b), Complex(-1.0, 0.0));
  EXPECT_EQ(H(0, 2), Complex(0.0, 0.0));
}

TEST(EffectiveHamiltonian, LossOnOddSitesOnly) {
  const ComplexMatrix H = lc::build_effective_hamiltonian(LatticeSpec::uniform(2, 0.0, 0.05));
  const Complex expected[] = {0.0, Complex(0, -0.1), 0.0, Complex(0, -0.1), 0.0};
  for (int a = 0; a < 5; ++a) EXPECT_NEAR(std::abs(H(a, a) - expected[a]), 0.0, 1e-16);
}

TEST(EffectiveHamiltonian, HermitianWithoutLoss) {
  const ComplexMatrix H = lc::build_effective_hamiltonian(LatticeSpec::uniform(7, 0.3, 0.0));
  EXPECT_EQ((H - H.adjoint()).norm(), 0.0);
  EXPECT_EQ(H.imag().norm(), 0.0);
  const ComplexMatrix Hl = lc::build_effective_hamiltonian(LatticeSpec::uniform(7, 0.3, 0.2));
  EXPECT_GT((Hl - Hl.adjoint()).norm(), 0.1);
}

TEST(ChiralOperator, SmallLatticeAntiDiagonal) {
  const ComplexMatrix X = lc::build_chiral_operator(LatticeSpec::uniform(1, 0.3, 0.2));
  EXPECT_EQ(X(2, 0), Complex(-1.0));  // row -j = 1, column j = -1
  EXPECT_EQ(X(1, 1), Complex(1.0));
  EXPECT_EQ(X(0, 2), Complex(-1.0));
  EXPECT_EQ(X.cwiseAbs().sum(), 3.0);
}

TEST(ChiralOperator, InvolutionAndSymmetry) {
  const LatticeSpec s = LatticeSpec::uniform(5, 0.3, 0.2);
  const ComplexMatrix X = lc::build_chiral_operator(s);
  EXPECT_EQ((X * X - ComplexMatrix::Identity(11, 11)).norm(), 0.0);
  EXPECT_EQ((X - X.transpose()).norm(), 0.0);
  const ComplexMatrix H = lc::build_effective_hamiltonian(s);
  EXPECT_LT((X * H.adjoint() * X + H).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ChiralOperator, IdentityFailsForRandomDecay) {
  const LatticeSpec s = LatticeSpec::random_decay(5, 0.3, 0.025, 0.125, 3);
  const ComplexMatrix X = lc::build_chiral_operator(s);
  const ComplexMatrix H = lc::build_effective_hamiltonian(s);
  EXPECT_GT((X * H.adjoint() * X + H).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(TranslationOperator, Definition) {
  const LatticeSpec s = LatticeSpec::uniform(1, 0.3, 0.2);
  EXPECT_EQ((lc::build_translation_operator(s, 0) - ComplexMatrix::Identity(3, 3)).norm(), 0.0);
  const ComplexMatrix S = lc::build_translation_operator(s, 1);
  EXPECT_EQ(S(0, 1), Complex(1.0));  // S[-1, 0]
  EXPECT_EQ(S(1, 2), Complex(1.0));  // S[0, 1]
  EXPECT_EQ(S.cwiseAbs().sum(), 2.0);
  EXPECT_THROW(lc::build_translation_operator(s, 3), lc::ParameterError);
  EXPECT_THROW(lc::build_translation_operator(s, -3), lc::ParameterError);
}

TEST(TranslationOperator, CommutatorOnInterior) {
  const int L = 6;
  for (int m : {2, 1, -3}) {
    const LatticeSpec s = LatticeSpec::uniform(L, 0.3, 0.2);
    const ComplexMatrix S = lc::build_translation_operator(s, m);
    const ComplexMatrix H = lc::build_effective_hamiltonian(s);
    const ComplexMatrix lhs = S * H - H * S;
    // i gamma (1 - (-1)^m) sum_j (-1)^j |j-m><j| + m F S_m
    ComplexMatrix rhs = ComplexMatrix::Zero(2 * L + 1, 2 * L + 1);
    const double pm = (m % 2 == 0) ? 1.0 : -1.0;
    for (int j = -L; j <= L; ++j) {
      const int r = j - m;
      if (r < -L || r > L) continue;
      const double sj = (j % 2 == 0) ? 1.0 : -1.0;
      rhs(r + L, j + L) = Complex(0.0, 0.2 * (1.0 - pm) * sj) + m * 0.3;
    }
    const int lim = L - std::abs(m);
    double worst = 0.0;
    for (int a = -lim; a <= lim; ++a)
      for (int b = -lim; b <= lim; ++b)
        worst = std::max(worst, std::abs(lhs(a + L, b + L) - rhs(a + L, b + L)));
    EXPECT_LT(worst, 1e-14) << "m=" << m;
  }
}

TEST(EffectiveHamiltonian, SpectrumClosedUnderReflectedConjugation) {
  // chiral identity => eigenvalues come in pairs (E, -conj E); also after the +i gamma shift
  const double gamma = 0.2;
  const ComplexMatrix H = lc::build_effective_hamiltonian(LatticeSpec::uniform(10, 0.3, gamma));
  std::vector<Complex> ev = lc::eigenvalues(H + Complex(0.0, gamma) * ComplexMatrix::Identity(21, 21));
  for (const Complex& e : ev) {
    double best = 1e9;
    for (const Complex& f : ev) best = std::min(best, std::abs(f + std::conj(e)));
    EXPECT_LT(best, 1e-9);
  }
}
