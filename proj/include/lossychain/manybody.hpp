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

#ifndef LOSSYCHAIN_MANYBODY_HPP
#define LOSSYCHAIN_MANYBODY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include <Eigen/Sparse>

#include "core.hpp"
#include "lattice.hpp"
#include "ode.hpp"
#include "propagator.hpp"

namespace lossychain {

using SparseComplexMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using Occupation = std::vector<std::uint8_t>;

/// Bosonic occupation basis with N <= N_max on M sites. Sectors are ordered by
/// particle number descending; inside a sector, occupation vectors are in
/// descending lexicographic order (N = 1 therefore runs over sites -L..L).
class FockBasis {
 public:
  FockBasis(int M, int N_max) : M_(M), N_max_(N_max) {
    if (M < 1) throw ParameterError("M must be >= 1");
    if (N_max != 1 && N_max != 2) throw ParameterError("N_max must be 1 or 2");
    offsets_.assign(static_cast<std::size_t>(N_max + 1), 0);
    for (int N = N_max; N >= 0; --N) {
      offsets_[static_cast<std::size_t>(N)] = static_cast<int>(states_.size());
      Occupation n(static_cast<std::size_t>(M), 0);
      enumerate(n, 0, N);
    }
    for (std::size_t i = 0; i < states_.size(); ++i) index_[states_[i]] = static_cast<int>(i);
  }

  int sites() const { return M_; }
  int max_particles() const { return N_max_; }
  int dim() const { return static_cast<int>(states_.size()); }
  const Occupation& state(int i) const { return states_.at(static_cast<std::size_t>(i)); }
  int particles(int i) const {
    int n = 0;
    for (auto x : state(i)) n += x;
    return n;
  }
  /// Index of an occupation vector, -1 if outside the basis.
  int index(const Occupation& n) const {
    const auto it = index_.find(n);
    return it == index_.end() ? -1 : it->second;
  }
  int sector_offset(int N) const { return offsets_.at(static_cast<std::size_t>(N)); }
  int sector_dim(int N) const {
    if (N < 0 || N > N_max_) return 0;
    const int end = N == 0 ? dim() : offsets_[static_cast<std::size_t>(N - 1)];
    return end - offsets_[static_cast<std::size_t>(N)];
  }

  /// a_j with sqrt(n_j) matrix elements (site index 0..M-1).
  SparseComplexMatrix annihilation(int site) const {
    check_site(site);
    std::vector<Eigen::Triplet<Complex>> t;
    for (int i = 0; i < dim(); ++i) {
      const Occupation& n = state(i);
      const auto s = static_cast<std::size_t>(site);
      if (n[s] == 0) continue;
      Occupation m = n;
      --m[s];
      t.emplace_back(index(m), i, std::sqrt(static_cast<double>(n[s])));
    }
    SparseComplexMatrix A(dim(), dim());
    A.setFromTriplets(t.begin(), t.end());
    return A;
  }

  /// a_j^dagger truncated to the basis (zero on the N_max sector).
  SparseComplexMatrix creation(int site) const { return annihilation(site).adjoint(); }

  SparseComplexMatrix number(int site) const {
    check_site(site);
    SparseComplexMatrix n(dim(), dim());
    std::vector<Eigen::Triplet<Complex>> t;
    for (int i = 0; i < dim(); ++i) {
      const auto v = state(i)[static_cast<std::size_t>(site)];
      if (v) t.emplace_back(i, i, static_cast<double>(v));
    }
    n.setFromTriplets(t.begin(), t.end());
    return n;
  }

 private:
  void check_site(int site) const {
    if (site < 0 || site >= M_) throw ParameterError("site index out of range");
  }
  void enumerate(Occupation& n, int pos, int left) {
    if (pos == M_ - 1) {
      n[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(left);
      states_.push_back(n);
      return;
    }
    for (int k = left; k >= 0; --k) {
      n[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(k);
      enumerate(n, pos + 1, left - k);
    }
    n[static_cast<std::size_t>(pos)] = 0;
  }

  int M_, N_max_;
  std::vector<Occupation> states_;
  std::map<Occupation, int> index_;
  std::vector<int> offsets_;
};

inline FockBasis build_fock_basis(int M, int N_max) { return FockBasis(M, N_max); }

namespace detail {

inline void check_basis(const LatticeSpec& spec, const FockBasis& basis) {
  if (basis.sites() != spec.sites()) throw ParameterError("basis does not match lattice size");
}

/// Hopping, interaction and tilt; extra adds per-site diagonal terms.
inline SparseComplexMatrix assemble_hamiltonian(const LatticeSpec& spec, const FockBasis& basis,
                                                bool with_loss) {
  check_basis(spec, basis);
  const int M = spec.sites();
  const int L = spec.half_width();
  const double U = spec.interaction();
  std::vector<Eigen::Triplet<Complex>> t;
  for (int i = 0; i < basis.dim(); ++i) {
    const Occupation& n = basis.state(i);
    Complex d = 0.0;
    for (int a = 0; a < M; ++a) {
      const double na = n[static_cast<std::size_t>(a)];
      d += 0.5 * U * na * (na - 1.0) + spec.tilt() * (a - L) * na;
      if (with_loss) d += spec.loss_term(a - L) * na;
    }
    if (d != 0.0) t.emplace_back(i, i, d);
    for (int a = 0; a < M; ++a) {
      const auto sa = static_cast<std::size_t>(a);
      if (n[sa] == 0) continue;
      for (int b : {a - 1, a + 1}) {
        if (b < 0 || b >= M) continue;
        Occupation m = n;
        const double amp = std::sqrt(static_cast<double>(m[sa]));
        --m[sa];
        const auto sb = static_cast<std::size_t>(b);
        const double amp2 = std::sqrt(static_cast<double>(m[sb]) + 1.0);
        ++m[sb];
        t.emplace_back(basis.index(m), i, -amp * amp2);
      }
    }
  }
  SparseComplexMatrix H(basis.dim(), basis.dim());
  H.setFromTriplets(t.begin(), t.end());
  return H;
}

}  // namespace detail

/// H = -sum (a+_{j+1} a_j + h.c.) + U/2 sum n(n-1) + F sum j n_j.
inline SparseComplexMatrix build_bh_hamiltonian(const LatticeSpec& spec, const FockBasis& basis) {
  return detail::assemble_hamiltonian(spec, basis, false);
}

/// H_BH + sum_j i gamma_j ((-1)^j - 1) n_j.
inline SparseComplexMatrix build_manybody_effective_hamiltonian(const LatticeSpec& spec,
                                                                const FockBasis& basis) {
  return detail::assemble_hamiltonian(spec, basis, true);
}

struct BECState {
  ComplexVector coefficients;
  int N0 = 0;
  ComplexVector vector;
};

/// (sum psi_j a+_j)^N0 |vac> / sqrt(N0!).
inline BECState make_bec_state(const FockBasis& basis, const ComplexVector& psi, int N0) {
  if (N0 < 1 || N0 > basis.max_particles()) throw ParameterError("N0 must be in 1..N_max");
  if (psi.size() != basis.sites()) throw ParameterError("psi length does not match basis");
  if (std::abs(psi.squaredNorm() - 1.0) > 1e-12) throw ParameterError("psi must have unit norm");
  ComplexVector v = ComplexVector::Zero(basis.dim());
  const int off = basis.sector_offset(N0);
  for (int i = off; i < off + basis.sector_dim(N0); ++i) {
    const Occupation& n = basis.state(i);
    // multinomial coefficient sqrt(N0! / prod n_j!) times prod psi_j^{n_j}
    Complex amp = 1.0;
    double fact = 1.0;
    for (int a = 0; a < basis.sites(); ++a) {
      const int na = n[static_cast<std::size_t>(a)];
      for (int r = 0; r < na; ++r) amp *= psi(a);
      for (int r = 2; r <= na; ++r) fact *= r;
    }
    double n0f = 1.0;
    for (int r = 2; r <= N0; ++r) n0f *= r;
    v(i) = amp * std::sqrt(n0f / fact);
  }
  return {psi, N0, v};
}

/// sigma_ij = Tr(rho a+_i a_j) / N0.
inline ComplexMatrix spdm(const ComplexMatrix& rho, const FockBasis& basis, int N0) {
  if (N0 < 1) throw ParameterError("N0 must be >= 1");
  const int M = basis.sites();
  std::vector<SparseComplexMatrix> a;
  for (int j = 0; j < M; ++j) a.push_back(basis.annihilation(j));
  ComplexMatrix s = ComplexMatrix::Zero(M, M);
  for (int j = 0; j < M; ++j) {
    const ComplexMatrix W = a[static_cast<std::size_t>(j)] * rho;  // a_j rho
    for (int i = 0; i < M; ++i) {
      Complex acc = 0.0;
      const auto& ai = a[static_cast<std::size_t>(i)];
      for (int x = 0; x < ai.outerSize(); ++x)
        for (SparseComplexMatrix::InnerIterator it(ai, x); it; ++it)
          acc += W(it.row(), it.col()) * std::conj(it.value());
      s(i, j) = acc / static_cast<double>(N0);
    }
  }
  return s;
}

/// Observables sampled along a master-equation run.
struct LindbladTrace {
  std::vector<double> times;
  RealMatrix site_density;          // <n_j>, rows = times
  RealMatrix renormalised_density;  // <n_j> / <N>
  std::vector<double> total_number;
  std::vector<double> trace;
  std::vector<double> min_eigenvalue;
  std::vector<double> hermiticity_error;
  std::vector<double> purity;
  RealMatrix sector_population;  // column N
  std::vector<ComplexMatrix> spdm;
  bool positivity_violation = false;
  bool boundary_spill = false;
  double first_spill_time = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr double trace_drift_tolerance = 1e-8;
inline constexpr double positivity_tolerance = 1e-8;

inline ode::Options lindblad_options() { return {1e-12, 1e-15}; }

namespace detail {

inline void add_sample(LindbladTrace& tr, double t, const RealVector& n, double trace,
                       double min_eig, double herm, double purity, const RealVector& sectors,
                       ComplexMatrix spdm_t) {
  tr.times.push_back(t);
  const auto r = static_cast<Eigen::Index>(tr.times.size()) - 1;
  tr.site_density.conservativeResize(r + 1, n.size());
  tr.renormalised_density.conservativeResize(r + 1, n.size());
  tr.sector_population.conservativeResize(r + 1, sectors.size());
  tr.site_density.row(r) = n.transpose();
  const double N = n.sum();
  tr.total_number.push_back(N);
  if (N > 0.0) tr.renormalised_density.row(r) = n.transpose() / N;
  else tr.renormalised_density.row(r).setZero();
  tr.trace.push_back(trace);
  tr.min_eigenvalue.push_back(min_eig);
  tr.hermiticity_error.push_back(herm);
  tr.purity.push_back(purity);
  tr.sector_population.row(r) = sectors.transpose();
  tr.spdm.push_back(std::move(spdm_t));
  if (min_eig < -positivity_tolerance) tr.positivity_violation = true;
  const Eigen::Index M = n.size();
  double edge = 0.0;
  for (Eigen::Index a = 0; a < M; ++a)
    if (a < spill_margin || a >= M - spill_margin) edge += n(a);
  if (N > 0.0 && edge >= spill_fraction * N && !tr.boundary_spill) {
    tr.boundary_spill = true;
    tr.first_spill_time = t;
  }
  if (std::abs(trace - tr.trace.front()) > trace_drift_tolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "trace drift " << std::abs(trace - tr.trace.front()) << " at t=" << t;
    throw NumericError(os.str());
  }
}

inline std::vector<int> lossy_sites(const LatticeSpec& spec) {
  std::vector<int> out;
  for (int j = -spec.half_width(); j <= spec.half_width(); ++j)
    if (j % 2 != 0 && spec.decay_at(j) > 0.0) out.push_back(j + spec.half_width());
  return out;
}

}  // namespace detail

/// Direct integration of the master equation on rho.
inline LindbladTrace evolve_lindblad(const LatticeSpec& spec, const FockBasis& basis,
                                     const ComplexMatrix& rho0, double t_final, double dt_out,
                                     int N0, const ode::Options& opt = lindblad_options()) {
  detail::check_basis(spec, basis);
  if (rho0.rows() != basis.dim() || rho0.cols() != basis.dim())
    throw ParameterError("rho0 dimension does not match basis");
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw ParameterError("rho0 not Hermitian");
  if (std::abs(rho0.trace() - 1.0) > 1e-10) throw ParameterError("rho0 trace must be 1");
  const SparseComplexMatrix H = build_manybody_effective_hamiltonian(spec, basis);
  struct Jump {
    double rate;
    SparseComplexMatrix a, ad;
  };
  std::vector<Jump> jumps;
  for (int s : detail::lossy_sites(spec)) {
    SparseComplexMatrix a = basis.annihilation(s);
    SparseComplexMatrix ad = a.adjoint();
    jumps.push_back({4.0 * spec.decay_at(s - spec.half_width()), std::move(a), std::move(ad)});
  }
  auto rhs = [&](double, const ComplexMatrix& rho, ComplexMatrix& d) {
    const ComplexMatrix X = H * rho;
    d = Complex(0.0, -1.0) * (X - X.adjoint());
    for (const Jump& J : jumps) d += J.rate * (J.a * (J.a * rho.adjoint()).adjoint());
  };
  std::vector<SparseComplexMatrix> nops;
  for (int j = 0; j < basis.sites(); ++j) nops.push_back(basis.number(j));
  LindbladTrace tr;
  auto observe = [&](double t, const ComplexMatrix& rho) {
    RealVector n(basis.sites());
    for (int j = 0; j < basis.sites(); ++j) {
      double acc = 0.0;
      for (int x = 0; x < nops[static_cast<std::size_t>(j)].outerSize(); ++x)
        for (SparseComplexMatrix::InnerIterator it(nops[static_cast<std::size_t>(j)], x); it; ++it)
          acc += it.value().real() * rho(it.row(), it.row()).real();
      n(j) = acc;
    }
    RealVector sectors = RealVector::Zero(basis.max_particles() + 1);
    for (int i = 0; i < basis.dim(); ++i) sectors(basis.particles(i)) += rho(i, i).real();
    const ComplexMatrix hrm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hrm, Eigen::EigenvaluesOnly);
    detail::add_sample(tr, t, n, rho.trace().real(), es.eigenvalues().minCoeff(),
                       (rho - rho.adjoint()).cwiseAbs().maxCoeff(), hrm.squaredNorm(), sectors,
                       spdm(rho, basis, N0));
  };
  ode::integrate_sampled<ComplexMatrix>(rhs, rho0, 0.0, t_final, dt_out, observe, opt);
  return tr;
}

/// Exact evolution for a pure initial state supported on one particle-number
/// sector: the top sector stays pure under H_eff, lower sectors are fed by the
/// jumps and carried as density-matrix blocks.
inline LindbladTrace evolve_lindblad_pure_sector(const LatticeSpec& spec, const FockBasis& basis,
                                                 const ComplexVector& state, double t_final,
                                                 double dt_out, int N0,
                                                 const ode::Options& opt = lindblad_options()) {
  detail::check_basis(spec, basis);
  if (state.size() != basis.dim()) throw ParameterError("state dimension does not match basis");
  if (std::abs(state.squaredNorm() - 1.0) > 1e-10) throw ParameterError("state must have unit norm");
  int top = -1;
  for (int i = 0; i < basis.dim(); ++i)
    if (std::abs(state(i)) > 0.0) {
      const int N = basis.particles(i);
      if (top >= 0 && N != top) throw ParameterError("state spans several particle-number sectors");
      top = N;
    }
  if (top < 0) throw ParameterError("state is zero");

  const SparseComplexMatrix Hfull = build_manybody_effective_hamiltonian(spec, basis);
  auto block = [&](const SparseComplexMatrix& X, int Nr, int Nc) {
    return SparseComplexMatrix(X.block(basis.sector_offset(Nr), basis.sector_offset(Nc),
                                       basis.sector_dim(Nr), basis.sector_dim(Nc)));
  };
  std::vector<SparseComplexMatrix> Hs;  // Hs[N]
  for (int N = 0; N <= top; ++N) Hs.push_back(block(Hfull, N, N));
  struct Jump {
    double rate;
    std::vector<SparseComplexMatrix> a;  // a[N]: sector N -> N-1 (N >= 1)
  };
  std::vector<Jump> jumps;
  for (int s : detail::lossy_sites(spec)) {
    const SparseComplexMatrix A = basis.annihilation(s);
    Jump J{4.0 * spec.decay_at(s - spec.half_width()), {SparseComplexMatrix()}};
    for (int N = 1; N <= top; ++N) J.a.push_back(block(A, N - 1, N));
    jumps.push_back(std::move(J));
  }
  // packing: [psi_top | rho_{top-1} | ... | rho_0]
  std::vector<Eigen::Index> off(static_cast<std::size_t>(top + 2), 0);
  const Eigen::Index dtop = basis.sector_dim(top);
  off[static_cast<std::size_t>(top)] = 0;
  Eigen::Index pos = dtop;
  for (int N = top - 1; N >= 0; --N) {
    off[static_cast<std::size_t>(N)] = pos;
    pos += static_cast<Eigen::Index>(basis.sector_dim(N)) * basis.sector_dim(N);
  }
  const Eigen::Index total = pos;
  auto blockmap = [&](ComplexVector& y, int N) {
    const Eigen::Index d = basis.sector_dim(N);
    return Eigen::Map<ComplexMatrix>(y.data() + off[static_cast<std::size_t>(N)], d, d);
  };
  auto cblockmap = [&](const ComplexVector& y, int N) {
    const Eigen::Index d = basis.sector_dim(N);
    return Eigen::Map<const ComplexMatrix>(y.data() + off[static_cast<std::size_t>(N)], d, d);
  };

  auto rhs = [&](double, const ComplexVector& y, ComplexVector& dy) {
    dy.resize(total);
    const auto psi = y.head(dtop);
    dy.head(dtop) = Complex(0.0, -1.0) * (Hs[static_cast<std::size_t>(top)] * psi);
    for (int N = top - 1; N >= 0; --N) {
      const auto R = cblockmap(y, N);
      auto D = blockmap(dy, N);
      if (R.rows() > 0) {
        const ComplexMatrix X = Hs[static_cast<std::size_t>(N)] * R;
        D = Complex(0.0, -1.0) * (X - X.adjoint());
      }
      for (const Jump& J : jumps) {
        const SparseComplexMatrix& a = J.a[static_cast<std::size_t>(N + 1)];
        if (N + 1 == top) {
          const ComplexVector w = a * psi;
          D.noalias() += J.rate * (w * w.adjoint());
        } else {
          const auto Rup = cblockmap(y, N + 1);
          const ComplexMatrix W = a * Rup;
          D += J.rate * (a * W.adjoint()).adjoint();
        }
      }
    }
  };

  std::vector<std::vector<SparseComplexMatrix>> asec(static_cast<std::size_t>(basis.sites()));
  for (int j = 0; j < basis.sites(); ++j) {
    const SparseComplexMatrix A = basis.annihilation(j);
    asec[static_cast<std::size_t>(j)].push_back(SparseComplexMatrix());
    for (int N = 1; N <= top; ++N) asec[static_cast<std::size_t>(j)].push_back(block(A, N - 1, N));
  }

  LindbladTrace tr;
  auto observe = [&](double t, const ComplexVector& y) {
    const int M = basis.sites();
    RealVector n = RealVector::Zero(M);
    RealVector sectors = RealVector::Zero(basis.max_particles() + 1);
    const ComplexVector psi = y.head(dtop);
    double trace = psi.squaredNorm();
    double purity = trace * trace;
    double min_eig = dtop > 1 ? 0.0 : trace;
    double herm = 0.0;
    sectors(top) = trace;
    ComplexMatrix sig = ComplexMatrix::Zero(M, M);
    {
      ComplexMatrix W(basis.sector_dim(top - 1), M);
      for (int j = 0; j < M; ++j) W.col(j) = asec[static_cast<std::size_t>(j)][static_cast<std::size_t>(top)] * psi;
      sig += W.adjoint() * W;
    }
    for (int i = 0; i < dtop; ++i) {
      const Occupation& o = basis.state(basis.sector_offset(top) + i);
      for (int a = 0; a < M; ++a) n(a) += o[static_cast<std::size_t>(a)] * std::norm(psi(i));
    }
    for (int N = top - 1; N >= 0; --N) {
      const ComplexMatrix R = cblockmap(y, N);
      const double tr_b = R.trace().real();
      trace += tr_b;
      sectors(N) = tr_b;
      herm = std::max(herm, (R - R.adjoint()).cwiseAbs().maxCoeff());
      const ComplexMatrix hr = 0.5 * (R + R.adjoint());
      purity += hr.squaredNorm();
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hr, Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
      for (int i = 0; i < R.rows(); ++i) {
        const Occupation& o = basis.state(basis.sector_offset(N) + i);
        for (int a = 0; a < M; ++a) n(a) += o[static_cast<std::size_t>(a)] * R(i, i).real();
      }
      if (N >= 1)
        for (int j = 0; j < M; ++j) {
          const auto& aj = asec[static_cast<std::size_t>(j)][static_cast<std::size_t>(N)];
          const ComplexMatrix W = aj * R;
          for (int i = 0; i < M; ++i) {
            const auto& ai = asec[static_cast<std::size_t>(i)][static_cast<std::size_t>(N)];
            Complex acc = 0.0;
            for (int x = 0; x < ai.outerSize(); ++x)
              for (SparseComplexMatrix::InnerIterator it(ai, x); it; ++it)
                acc += W(it.row(), it.col()) * std::conj(it.value());
            sig(i, j) += acc;
          }
        }
    }
    detail::add_sample(tr, t, n, trace, min_eig, herm, purity, sectors,
                       sig / static_cast<double>(N0));
  };
  ComplexVector y0 = ComplexVector::Zero(total);
  y0.head(dtop) = state.segment(basis.sector_offset(top), dtop);
  ode::integrate_sampled<ComplexVector>(rhs, y0, 0.0, t_final, dt_out, observe, opt);
  return tr;
}

}  // namespace lossychain

#endif  // LOSSYCHAIN_MANYBODY_HPP
