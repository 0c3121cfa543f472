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

// Prints the converged Wannier-Stark ladders of the lossy chain for a few
// decay rates.

#include <cstdio>

#include "lossychain/spectral.hpp"

int main() {
  namespace lc = lossychain;
  const double F = 0.3;
  std::printf("%8s %14s %14s %6s\n", "gamma", "Im ladder 0", "Im ladder 1", "n");
  for (double gamma : {0.0, 0.1, 0.2, 0.5, 1.0}) {
    const auto eigs = lc::converged_spectrum(lc::LatticeSpec::uniform(60, F, gamma), 50, 60, 1e-8);
    const auto lad = lc::extract_ladders(eigs, F, gamma, 1e-6);
    std::printf("%8.3f %14.8f %14.8f %6zu\n", gamma, lad.im_lambda, -lad.im_lambda - 2.0 * gamma,
                eigs.size());
  }
  return 0;
}
