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

// Dense helpers on top of Eigen. All spectral work goes through the
// Hermitized matrix (A + A*)/2 so that spectra come out real.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "muwork/error.hpp"
#include "muwork/types.hpp"

namespace muwork {

inline bool approx_equal(const CMat& a, const CMat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).norm() <= tol * std::max(1.0, b.norm());
}

inline CMat hermitize(const CMat& a) { return 0.5 * (a + a.adjoint()); }

inline bool is_hermitian(const CMat& a, double tol) {
  return a.rows() == a.cols() && (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool all_finite(const CMat& a) { return a.allFinite(); }

inline void require_square(const CMat& a, const char* what) {
  if (a.rows() != a.cols()) {
    fail(ErrorKind::dimension, std::string(what) + " must be square, got " +
                                   std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

/// Eigenvalues of the Hermitized matrix, ascending.
inline RVec hermitian_eigenvalues(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_eigenvalue(const CMat& a) {
  if (a.size() == 0) return 0.0;
  return hermitian_eigenvalues(a)(0);
}

inline bool is_psd(const CMat& a, double tol_psd) {
  return min_eigenvalue(a) >= -tol_psd * (1.0 + a.norm());
}

inline bool is_unitary(const CMat& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const CMat id = CMat::Identity(u.rows(), u.cols());
  return (u.adjoint() * u - id).norm() <= tol * std::max(1.0, id.norm());
}

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline CMat block_diag(const std::vector<CMat>& blocks) {
  Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  CMat out = CMat::Zero(rows, cols);
  Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

/// Nearest unitary in Frobenius norm (the unitary polar factor).
inline CMat polar_unitary(const CMat& m) {
  require_square(m, "polar input");
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// Orthonormal basis (as columns) of the null space of `m`, using singular
/// values <= rel_tol * sigma_max as zero.
inline CMat null_space(const CMat& m, double rel_tol) {
  const Index n = m.cols();
  if (m.rows() == 0 || m.norm() == 0.0) return CMat::Identity(n, n);
  CMat work = m;
  if (m.rows() > 2 * n) {
    // Compress tall systems first; R has the same right singular vectors.
    Eigen::HouseholderQR<CMat> qr(m);
    work = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  }
  Eigen::JacobiSVD<CMat> svd(work, Eigen::ComputeFullV);
  const RVec& s = svd.singularValues();
  const double cutoff = rel_tol * s(0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

/// Clusters of indices into an ascending value list, split wherever
/// consecutive values differ by more than `gap`.
inline std::vector<std::vector<Index>> cluster_sorted(const RVec& sorted, double gap) {
  std::vector<std::vector<Index>> clusters;
  for (Index i = 0; i < sorted.size(); ++i) {
    if (i == 0 || sorted(i) - sorted(i - 1) > gap) clusters.emplace_back();
    clusters.back().push_back(i);
  }
  return clusters;
}

/// Smallest gap between consecutive entries of an ascending list that still
/// counts as a separation (used to flag ambiguous splits).
inline double smallest_split_gap(const RVec& sorted, double gap) {
  double smallest = std::numeric_limits<double>::infinity();
  for (Index i = 1; i < sorted.size(); ++i) {
    const double g = sorted(i) - sorted(i - 1);
    if (g > gap) smallest = std::min(smallest, g);
  }
  return smallest;
}

/// A^{-1/2} for a positive definite Hermitian A.
inline CMat inv_sqrt_pd(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(a));
  const RVec& ev = es.eigenvalues();
  if (ev(0) <= 0.0) fail(ErrorKind::numerical, "inverse square root of a singular matrix");
  return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().adjoint();
}

/// Trace inner product <a, b> = Tr(b* a).
inline cplx trace_inner(const CMat& a, const CMat& b) { return (b.adjoint() * a).trace(); }

/// Modified Gram-Schmidt in the trace inner product, run twice for
/// stability. Elements whose remainder falls below `tol` (relative to their
/// original norm) are dropped.
inline std::vector<CMat> orthonormalize(const std::vector<CMat>& mats, double tol) {
  std::vector<CMat> out;
  for (const auto& m : mats) {
    const double n0 = m.norm();
    if (n0 == 0.0) continue;
    CMat v = m;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) v -= trace_inner(v, q) * q;
    }
    const double nv = v.norm();
    if (nv > tol * n0) out.push_back(v / nv);
  }
  return out;
}

/// Distance from `x` to span(basis) for a trace-orthonormal basis.
inline double distance_to_span(const CMat& x, const std::vector<CMat>& basis) {
  CMat r = x;
  for (const auto& b : basis) r -= trace_inner(x, b) * b;
  return r.norm();
}

}  // namespace muwork
