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

// Follows a broad Gaussian beam through one Bloch period and prints the
// band-resolved weights and centres.

#include <cmath>
#include <cstdio>

#include "lossychain/semiclassics.hpp"

int main() {
  namespace lc = lossychain;
  const double F = 0.2, gamma = 0.05, T = lc::bloch_period(F);
  const auto spec = lc::LatticeSpec::uniform(60, F, gamma);
  const auto psi0 = lc::make_gaussian(spec, {0.0, 0.0, std::sqrt(20.0)});
  const auto tr = lc::evolve_single_particle(spec, psi0, T, T / 16);
  std::printf("%8s %10s %10s %10s %10s %10s\n", "t/T", "norm", "w_plus", "w_minus", "q_plus", "q_minus");
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const auto s = lc::band_resolved(tr.times[i], tr.trajectory[i], gamma);
    std::printf("%8.4f %10.6f %10.6f %10.6f %10.4f %10.4f\n", tr.times[i] / T, tr.total_norm[i],
                s.weight_plus, s.weight_minus, s.q_plus, s.q_minus);
  }
  return 0;
}
