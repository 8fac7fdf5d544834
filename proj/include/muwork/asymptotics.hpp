// Copyright 2026 The muwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Long-run behaviour of a unital channel: transfer-matrix spectra, the
// peripheral part, Cesaro means and the search for a mixed-unitary power.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "muwork/algebra.hpp"
#include "muwork/channel.hpp"
#include "muwork/mixing.hpp"

namespace muwork {

struct SpectralReport {
  std::vector<cplx> eigenvalues;  // by modulus descending, then phase
  std::vector<cplx> peripheral;
  /// Smallest m with lambda^m = 1 on the periphery, or 0 when some
  /// peripheral phase is not a rational with denominator <= 1000.
  long long period = 1;
  double gap = 1.0;
};

inline std::vector<cplx> transfer_eigenvalues(const Channel& phi) {
  Eigen::ComplexEigenSolver<CMat> es(phi.transfer(), false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12) return ma > mb;
    return std::arg(a) < std::arg(b);
  });
  return ev;
}

/// Best rational approximation p/q of x with q <= max_den, by continued
/// fractions. Returns q, or 0 if no such approximation is within tol.
inline long long rational_denominator(double x, long long max_den, double tol) {
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rest = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(rest);
    const long long ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0;
    const long long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol) return k1;
    const double frac = rest - a;
    if (frac < 1e-15) break;
    rest = 1.0 / frac;
  }
  return 0;
}

inline SpectralReport spectral_report(const Channel& phi, double tol_peripheral = 1e-6) {
  SpectralReport rep;
  rep.eigenvalues = transfer_eigenvalues(phi);
  double max_inner = 0.0;
  long long period = 1;
  for (const cplx& l : rep.eigenvalues) {
    if (std::abs(l) >= 1.0 - tol_peripheral) {
      rep.peripheral.push_back(l);
      double turns = std::arg(l) / (2.0 * std::numbers::pi);
      if (turns < 0.0) turns += 1.0;
      const long long q = rational_denominator(turns, 1000, 1e-6);
      period = (q == 0 || period == 0) ? 0 : std::lcm(period, q);
    } else {
      max_inner = std::max(max_inner, std::abs(l));
    }
  }
  if (period > 0) {
    for (const cplx& l : rep.peripheral) {
      if (std::abs(std::pow(l, static_cast<double>(period)) - 1.0) > 1e-5) period = 0;
    }
  }
  rep.period = period;
  rep.gap = 1.0 - max_inner;
  return rep;
}

/// Largest distance in a greedy nearest-neighbour matching of two
/// multisets, or infinity when the sizes differ.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::vector<char> used(b.size(), 0);
  for (const cplx& x : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && std::abs(x - b[j]) < best_d) {
        best_d = std::abs(x - b[j]);
        best = j;
      }
    }
    used[best] = 1;
    worst = std::max(worst, best_d);
  }
  return worst;
}

/// Fix(phi) is the scalars.
inline bool is_irreducible(const Channel& phi, Rng& rng) {
  return fixed_point_algebra(phi, rng).algebra_dim() == 1;
}

inline bool is_irreducible(const Channel& phi) {
  Rng rng(0x5eed);
  return is_irreducible(phi, rng);
}

/// Irreducible with peripheral spectrum {1}.
inline bool is_primitive(const Channel& phi, double tol_peripheral = 1e-6) {
  if (!is_irreducible(phi)) return false;
  const auto rep = spectral_report(phi, tol_peripheral);
  return rep.peripheral.size() == 1 && std::abs(rep.peripheral.front() - 1.0) <= tol_peripheral;
}

inline void require_peripheral_pair(const Channel& phi, const CMat& x, cplx lambda, double tol) {
  if (x.rows() != phi.dim() || x.cols() != phi.dim()) fail(ErrorKind::dimension, "eigenvector does not match channel");
  if (std::abs(std::abs(lambda) - 1.0) > tol) fail(ErrorKind::precondition, "eigenvalue is not on the unit circle");
  if (x.norm() == 0.0 || (phi.apply(x) - lambda * x).norm() > tol * x.norm()) {
    fail(ErrorKind::precondition, "(X, lambda) is not an eigenpair of the channel");
  }
}

/// For a peripheral eigenpair: K_i X = lambda X K_i for every Kraus operator
/// and phi(X A) = lambda X phi(A) on random A.
inline bool peripheral_eigenvector_check(const Channel& phi, const CMat& x, cplx lambda, Rng& rng,
                                         double tol = 1e-9) {
  require_peripheral_pair(phi, x, lambda, tol);
  const double scale = x.norm();
  for (const auto& k : phi.kraus().ops()) {
    if ((k * x - lambda * x * k).norm() > tol * scale * std::max(1.0, k.norm())) return false;
  }
  for (int t = 0; t < 3; ++t) {
    const CMat a = ginibre(phi.dim(), phi.dim(), rng);
    if ((phi.apply(x * a) - lambda * x * phi.apply(a)).norm() > tol * scale * std::max(1.0, a.norm())) return false;
  }
  return true;
}

struct PeripheralBlock {
  std::size_t row = 0;
  std::size_t col = 0;
  double scale = 0.0;  // c with X_jk X_jk^* = c I, zero for a vanishing block
};

struct PeripheralAnalysis {
  int case_number = 1;  // 1: block diagonal, 2: some off-diagonal block
  std::vector<PeripheralBlock> blocks;
  /// For case 2: blocks (j, k) and U with phi_j = ad_U . phi_k . ad_U^*.
  std::optional<std::size_t> j, k;
  std::optional<CMat> unitary;
};

/// Reads a peripheral eigenvector in the blocks of a commutative fixed
/// algebra: every block is zero or a multiple of a unitary, and a nonzero
/// off-diagonal block (j, k) exhibits the unitary equivalence of the block
/// channels phi_j and phi_k.
inline PeripheralAnalysis analyze_peripheral_eigenvector(const Channel& phi, const CMat& x, cplx lambda, Rng& rng,
                                                         double tol = 1e-9) {
  require_peripheral_pair(phi, x, lambda, tol);
  const AlgebraStructure fix = fixed_point_algebra(phi, rng);
  for (const auto& b : fix.blocks()) {
    if (b.m != 1) fail(ErrorKind::precondition, "fixed-point algebra is not commutative");
  }
  const CMat y = fix.unitary().adjoint() * x * fix.unitary();
  const double scale = x.norm();
  PeripheralAnalysis out;
  const std::size_t r = fix.blocks().size();
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t k = 0; k < r; ++k) {
      const Index nj = fix.blocks()[j].n, nk = fix.blocks()[k].n;
      const CMat xjk = y.block(fix.offset(j), fix.offset(k), nj, nk);
      PeripheralBlock pb{j, k, 0.0};
      if (xjk.norm() > tol * scale) {
        if (nj != nk) fail(ErrorKind::structure, "nonzero block between blocks of different sizes");
        const CMat g = xjk * xjk.adjoint();
        const double c = g.trace().real() / static_cast<double>(nj);
        if ((g - c * CMat::Identity(nj, nj)).norm() > std::max(tol, 1e-8) * std::max(1.0, g.norm())) {
          fail(ErrorKind::structure, "block is not a multiple of a unitary");
        }
        pb.scale = c;
        if (j != k && !out.unitary) {
          const CMat u = xjk / std::sqrt(c);
          const Channel pj = restrict_block(phi, fix, j);
          const Channel pk = restrict_block(phi, fix, k);
          const CMat lhs = unitary_transfer(u) * pk.transfer() * unitary_transfer(u.adjoint());
          if (!approx_equal(lhs, pj.transfer(), std::max(tol, 1e-8))) {
            fail(ErrorKind::numerical, "block channels are not unitarily equivalent");
          }
          out.case_number = 2;
          out.j = j;
          out.k = k;
          out.unitary = fix.unitary().middleCols(fix.offset(j), nj) * u *
                        fix.unitary().middleCols(fix.offset(k), nk).adjoint();
        }
      }
      out.blocks.push_back(pb);
    }
  }
  return out;
}

/// (1/N) sum_{n=1}^{N} T^n for the transfer matrix T.
inline CMat cesaro_fixed_expectation(const Channel& phi, Index n) {
  if (n < 1) fail(ErrorKind::domain, "Cesaro mean needs N >= 1");
  const CMat& t = phi.transfer();
  CMat term = t;
  CMat acc = t;
  for (Index i = 2; i <= n; ++i) {
    term = term * t;
    acc += term;
  }
  return acc / static_cast<double>(n);
}

struct PowerStep {
  int k = 0;
  std::string outcome;  // "outside", "certified", "inconclusive", "unitary"
  double min_eigenvalue = 0.0;
  std::vector<Block> blocks;
  double residual = 0.0;
};

struct PowerSearchResult {
  std::optional<int> k;
  std::optional<MixedUnitaryDecomposition> decomposition;
  std::optional<AlgebraStructure> algebra;
  std::optional<MixingCertificate> certificate;
  std::vector<PowerStep> steps;
};

/// Smallest k <= k_max at which phi^k is certified mixed unitary: either a
/// single unitary Kraus operator, or inside the guaranteed ball around the
/// conditional expectation onto Fix(phi^k), followed by an explicit
/// decomposition. A miss is inconclusive, not a proof.
inline PowerSearchResult find_mixed_unitary_power(const Channel& phi, int k_max, const ConstructOptions& opt, Rng& rng,
                                                  const Tolerances& tol = {}) {
  if (k_max < 1) fail(ErrorKind::domain, "k_max must be >= 1");
  if (!phi.is_unital_channel()) fail(ErrorKind::precondition, "power search needs a unital channel");
  PowerSearchResult out;
  Channel pk = phi;
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) pk = compose(phi, pk, tol).canonical(tol);
    PowerStep step;
    step.k = k;
    const Channel canon = pk.canonical(tol);
    if (canon.kraus().size() == 1) {
      CMat u = canon.kraus()[0];
      u /= std::sqrt(std::abs((u.adjoint() * u).trace().real() / static_cast<double>(u.rows())));
      const AlgebraStructure fa = fixed_point_algebra(pk, rng, tol);
      step.outcome = "unitary";
      step.blocks = fa.blocks();
      auto dec = make_decomposition({1.0}, {polar_unitary(u)}, pk.choi());
      step.residual = dec.residual;
      out.steps.push_back(step);
      out.k = k;
      out.decomposition = std::move(dec);
      out.algebra = fa;
      out.certificate = mixing_constant(fa);
      return out;
    }
    const AlgebraStructure fa = fixed_point_algebra(pk, rng, tol);
    const BallTest ball = is_in_guaranteed_ball(pk, fa, tol);
    step.min_eigenvalue = ball.min_eigenvalue;
    step.blocks = fa.blocks();
    if (!ball.inside) {
      step.outcome = "outside";
      out.steps.push_back(step);
      continue;
    }
    try {
      auto dec = construct_mixed_unitary(pk, fa, opt, rng);
      step.outcome = "certified";
      step.residual = dec.residual;
      out.steps.push_back(step);
      out.k = k;
      out.decomposition = std::move(dec);
      out.algebra = fa;
      out.certificate = ball.certificate;
      return out;
    } catch (const NoCertificateError& e) {
      step.outcome = "inconclusive";
      step.residual = e.best_residual();
      out.steps.push_back(step);
    }
  }
  return out;
}

}  // namespace muwork
