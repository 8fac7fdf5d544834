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

// Correlation matrices (PSD, unit diagonal), the Schur-product channels
// they define, and decompositions into rank-one correlation matrices zz^*
// with |z_i| = 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "muwork/channel.hpp"
#include "muwork/convex.hpp"
#include "muwork/named.hpp"
#include "muwork/random.hpp"

namespace muwork {

class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;

  /// Validates PSD and unit diagonal; numerical rank uses eigenvalues above
  /// tol.rank * lambda_max.
  explicit CorrelationMatrix(const CMat& c, const Tolerances& tol = {}) {
    if (c.rows() != c.cols() || c.rows() < 1) fail(ErrorKind::invalid_correlation, "correlation matrix must be square");
    if (!c.allFinite()) fail(ErrorKind::invalid_correlation, "correlation matrix has non-finite entries");
    if (!is_hermitian(c, std::max(tol.eq, 1e-12) * std::max(1.0, c.norm()))) {
      fail(ErrorKind::invalid_correlation, "correlation matrix is not Hermitian");
    }
    for (Index i = 0; i < c.rows(); ++i) {
      if (std::abs(c(i, i) - 1.0) > tol.eq) {
        fail(ErrorKind::invalid_correlation, "diagonal entry " + std::to_string(i) + " is not 1");
      }
    }
    mat_ = hermitize(c);
    eigenvalues_ = hermitian_eigenvalues(mat_);
    if (eigenvalues_(0) < -tol.psd * (1.0 + mat_.norm())) {
      fail(ErrorKind::invalid_correlation, "matrix is not positive semidefinite (eigenvalue " +
                                               std::to_string(eigenvalues_(0)) + ")");
    }
    const double lmax = eigenvalues_(eigenvalues_.size() - 1);
    rank_ = 0;
    for (Index i = 0; i < eigenvalues_.size(); ++i) rank_ += eigenvalues_(i) > tol.rank * lmax ? 1 : 0;
  }

  Index dim() const { return mat_.rows(); }
  const CMat& mat() const { return mat_; }
  Index rank() const { return rank_; }
  /// Ascending.
  const RVec& eigenvalues() const { return eigenvalues_; }
  bool is_real() const { return mat_.imag().cwiseAbs().maxCoeff() <= 1e-12; }

 private:
  CMat mat_;
  RVec eigenvalues_;
  Index rank_ = 0;
};

/// Random correlation matrix of rank <= rank: normalized Gram matrix of
/// Gaussian rows.
inline CorrelationMatrix random_correlation(Index d, Index rank, Rng& rng, bool real = false) {
  CMat v = real ? CMat(gaussian_real(d, rank, rng).cast<cplx>()) : ginibre(d, rank, rng);
  for (Index i = 0; i < d; ++i) v.row(i).normalize();
  CMat c = v * v.adjoint();
  for (Index i = 0; i < d; ++i) c(i, i) = 1.0;
  return CorrelationMatrix(c);
}

/// X -> X o C, with Kraus operators sqrt(lambda) diag(u) from C = sum lambda u u^*.
inline Channel schur_channel(const CorrelationMatrix& c) {
  Eigen::SelfAdjointEigenSolver<CMat> es(c.mat());
  const double lmax = es.eigenvalues().maxCoeff();
  std::vector<CMat> ops;
  for (Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
    const double l = es.eigenvalues()(i);
    if (l <= 1e-14 * lmax) continue;
    ops.push_back(CMat(std::sqrt(l) * es.eigenvectors().col(i).asDiagonal()));
  }
  return Channel::from_kraus(KrausSet(c.dim(), std::move(ops)));
}

/// Reads c_ij = phi(E_ij)_ij from a channel that fixes the diagonal.
inline CorrelationMatrix correlation_of(const Channel& phi, const Tolerances& tol = {}) {
  const Index d = phi.dim();
  for (Index i = 0; i < d; ++i) {
    const CMat e = matrix_unit(d, i, i);
    if ((phi.apply(e) - e).norm() > std::max(tol.eq, 1e-9)) {
      fail(ErrorKind::precondition, "channel does not fix the diagonal algebra");
    }
  }
  CMat c(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) c(i, j) = phi.apply(matrix_unit(d, i, j))(i, j);
  return CorrelationMatrix(c, tol);
}

/// sum_k w_k z_k z_k^* approximating a target correlation matrix.
struct RankOneAtomSet {
  std::vector<CVec> atoms;
  std::vector<double> weights;
  CMat target;
  double residual = 0.0;

  CMat reconstruction() const {
    CMat m = CMat::Zero(target.rows(), target.cols());
    for (std::size_t k = 0; k < atoms.size(); ++k) m.noalias() += weights[k] * (atoms[k] * atoms[k].adjoint());
    return m;
  }
  double recompute_residual() const { return (reconstruction() - target).norm(); }
  double weight_sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }
  /// The mixture of diagonal-unitary conjugations with these atoms.
  CMat mixed_unitary_choi() const {
    std::vector<CMat> us;
    for (const auto& z : atoms) us.push_back(z.asDiagonal());
    return muwork::mixed_unitary_choi(weights, us);
  }
};

/// Exact decomposition of (C + (d - 1) I) / d over the 3^d vectors with
/// entries in the cube roots of unity, weighted by <z, C z> / (d 3^d). Cube
/// roots are the smallest grid that averages away every monomial the Haar
/// integral would kill.
inline RankOneAtomSet quadrature_decompose(const CorrelationMatrix& c, Index d_max = 8) {
  const Index d = c.dim();
  if (d > d_max) {
    fail(ErrorKind::size, "exact quadrature has 3^" + std::to_string(d) + " atoms; use rank_r_mix or mv_decompose for d > " +
                              std::to_string(d_max));
  }
  const cplx roots[3] = {1.0, root_of_unity(3, 1), root_of_unity(3, 2)};
  Index count = 1;
  for (Index i = 0; i < d; ++i) count *= 3;
  RankOneAtomSet out;
  out.target = (c.mat() + static_cast<double>(d - 1) * CMat::Identity(d, d)) / static_cast<double>(d);
  out.atoms.reserve(static_cast<std::size_t>(count));
  out.weights.reserve(static_cast<std::size_t>(count));
  const double norm = 1.0 / (static_cast<double>(d) * static_cast<double>(count));
  for (Index idx = 0; idx < count; ++idx) {
    CVec z(d);
    Index rest = idx;
    for (Index i = d; i-- > 0;) {
      z(i) = roots[rest % 3];
      rest /= 3;
    }
    const double w = std::max(0.0, (z.adjoint() * c.mat() * z)(0).real()) * norm;
    out.atoms.push_back(std::move(z));
    out.weights.push_back(w);
  }
  out.residual = out.recompute_residual();
  return out;
}

/// -1 + 1/(1 - c e^{it}) + 1/(1 - conj(c) e^{-it}), the Poisson kernel
/// (1 - |c|^2) / |1 - c e^{it}|^2. A probability density on the circle with
/// mean of e^{-it} equal to c.
inline double fc_density(cplx c, double theta) {
  if (std::abs(c) > 1.0 + 1e-12) fail(ErrorKind::domain, "|c| must be at most 1");
  const cplx q = 1.0 - c * std::polar(1.0, theta);
  if (std::abs(q) < 1e-12) fail(ErrorKind::pole, "density evaluated at its pole");
  return -1.0 + 2.0 * (1.0 / q).real();
}

/// M(v): off-diagonal entries of v v^*, unit diagonal.
inline CMat m_of(const CVec& v) {
  CMat m = v * v.adjoint();
  for (Index i = 0; i < v.size(); ++i) m(i, i) = 1.0;
  return m;
}

struct MvOptions {
  Index grid = 64;
  /// Dimensions up to this use the full product grid, larger ones a sample.
  Index full_grid_max_dim = 3;
  Index samples = 4096;
  double tol = 1e-6;
};

namespace detail {

/// Finite distribution on the unit circle with mean exactly v: grid points
/// e^{-i theta_j}, weighted by NNLS on the mean constraint, plus the two
/// chord endpoints through v when v lies outside the inscribed polygon.
struct Marginal {
  std::vector<cplx> points;
  std::vector<double> prior;   // density weights on the grid
  std::vector<double> exact;   // mean-matching weights
};

inline Marginal circle_marginal(cplx v, Index grid) {
  Marginal m;
  const double r = std::abs(v);
  if (r >= 1.0 - 1e-12) {
    m.points = {v / r};
    m.prior = {1.0};
    m.exact = {1.0};
    return m;
  }
  double total = 0.0;
  for (Index j = 0; j < grid; ++j) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid);
    m.points.push_back(std::polar(1.0, -theta));
    m.prior.push_back(fc_density(v, theta));
    total += m.prior.back();
  }
  for (auto& p : m.prior) p /= total;
  RMat a(3, grid);
  for (Index j = 0; j < grid; ++j) {
    const cplx p = m.points[static_cast<std::size_t>(j)];
    a(0, j) = 1.0;
    a(1, j) = p.real();
    a(2, j) = p.imag();
  }
  const RVec b = (RVec(3) << 1.0, v.real(), v.imag()).finished();
  const auto fit = nnls(a, b);
  if (fit.residual <= 1e-13) {
    m.exact.assign(fit.weights.data(), fit.weights.data() + grid);
    return m;
  }
  // v is outside the inscribed polygon: use the chord through v.
  const double spread = std::acos(r);
  const double phase = r > 0.0 ? std::arg(v) : 0.0;
  m.exact.assign(static_cast<std::size_t>(grid), 0.0);
  m.points.push_back(std::polar(1.0, phase + spread));
  m.points.push_back(std::polar(1.0, phase - spread));
  m.prior.push_back(0.0);
  m.prior.push_back(0.0);
  m.exact.push_back(0.5);
  m.exact.push_back(0.5);
  return m;
}

}  // namespace detail

/// Decomposes M(v) for |v_i| <= 1 into rank-one correlation atoms. Coordinate
/// i ranges over N-th roots of unity weighted by the density with parameter
/// v_i; independence across coordinates reproduces M(v). Candidate atoms
/// come from the full product grid (small d) or a sample of it plus the
/// product of exact finite marginals, and the weights are fitted by NNLS.
inline RankOneAtomSet mv_decompose(const CVec& v, const MvOptions& opt, Rng& rng) {
  const Index d = v.size();
  if (d < 1) fail(ErrorKind::dimension, "empty vector");
  if (opt.grid < 3) fail(ErrorKind::domain, "grid must have at least 3 points");
  for (Index i = 0; i < d; ++i) {
    if (std::abs(v(i)) > 1.0 + 1e-12) fail(ErrorKind::domain, "entries of v must have modulus at most 1");
  }
  std::vector<detail::Marginal> marg;
  for (Index i = 0; i < d; ++i) marg.push_back(detail::circle_marginal(v(i), opt.grid));

  std::vector<std::vector<std::size_t>> cands;
  auto add_product = [&](const std::vector<std::vector<std::size_t>>& choices) {
    std::vector<std::size_t> pick(static_cast<std::size_t>(d), 0);
    while (true) {
      std::vector<std::size_t> c(static_cast<std::size_t>(d));
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = choices[i][pick[i]];
      cands.push_back(std::move(c));
      std::size_t i = pick.size();
      while (i-- > 0) {
        if (++pick[i] < choices[i].size()) break;
        pick[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  };
  std::vector<std::vector<std::size_t>> support(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    const auto& e = marg[static_cast<std::size_t>(i)].exact;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j] > 0.0) support[static_cast<std::size_t>(i)].push_back(j);
  }
  if (d <= opt.full_grid_max_dim) {
    std::vector<std::vector<std::size_t>> all(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
      const auto& m = marg[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < m.points.size(); ++j)
        if (m.prior[j] > 0.0 || m.exact[j] > 0.0) all[static_cast<std::size_t>(i)].push_back(j);
    }
    add_product(all);
  } else {
    add_product(support);
    std::vector<std::discrete_distribution<std::size_t>> draw;
    for (const auto& m : marg) draw.emplace_back(m.prior.begin(), m.prior.end());
    for (Index s = 0; s < opt.samples; ++s) {
      std::vector<std::size_t> c(static_cast<std::size_t>(d));
      for (Index i = 0; i < d; ++i) c[static_cast<std::size_t>(i)] = draw[static_cast<std::size_t>(i)](rng);
      cands.push_back(std::move(c));
    }
  }

  const CMat target = m_of(v);
  RMat a(d * d, static_cast<Index>(cands.size()));
  for (std::size_t j = 0; j < cands.size(); ++j) {
    CVec z(d);
    for (Index i = 0; i < d; ++i) z(i) = marg[static_cast<std::size_t>(i)].points[cands[j][static_cast<std::size_t>(i)]];
    a.col(static_cast<Index>(j)) = outer_to_real(z);
  }
  const auto fit = nnls(a, hermitian_to_real(target));

  RankOneAtomSet out;
  out.target = target;
  for (std::size_t j = 0; j < cands.size(); ++j) {
    const double w = fit.weights(static_cast<Index>(j));
    if (w <= 0.0) continue;
    CVec z(d);
    for (Index i = 0; i < d; ++i) z(i) = marg[static_cast<std::size_t>(i)].points[cands[j][static_cast<std::size_t>(i)]];
    out.atoms.push_back(std::move(z));
    out.weights.push_back(w);
  }
  out.residual = out.recompute_residual();
  if (out.residual > opt.tol) {
    throw NoCertificateError("M(v) decomposition above tolerance", out.residual);
  }
  return out;
}

inline RankOneAtomSet mv_decompose(const CVec& v, Rng& rng) { return mv_decompose(v, MvOptions{}, rng); }

struct RankMix {
  Index rank = 1;
  double p = 1.0;  // 1 / rank
  double eigenvalue_margin = 0.0;  // smallest kept eigenvalue over largest dropped one
  RankOneAtomSet atoms;
};

/// Decomposes (C + (r - 1) I) / r for r = rank C as the average of the M(v_k)
/// decompositions, where C = sum_k v_k v_k^* spectrally.
inline RankMix rank_r_mix(const CorrelationMatrix& c, const MvOptions& opt, Rng& rng, const Tolerances& tol = {}) {
  const Index d = c.dim();
  const Index r = c.rank();
  if (r < 1) fail(ErrorKind::invalid_correlation, "rank must be at least 1");
  Eigen::SelfAdjointEigenSolver<CMat> es(c.mat());
  RankMix out;
  out.rank = r;
  out.p = 1.0 / static_cast<double>(r);
  const RVec& ev = es.eigenvalues();
  out.eigenvalue_margin = r < d ? ev(d - r) / std::max(1e-300, std::abs(ev(d - r - 1))) : std::numeric_limits<double>::infinity();
  out.atoms.target = (c.mat() + static_cast<double>(r - 1) * CMat::Identity(d, d)) / static_cast<double>(r);
  for (Index k = 0; k < r; ++k) {
    const Index col = d - 1 - k;
    const CVec v = std::sqrt(std::max(0.0, ev(col))) * es.eigenvectors().col(col);
    if (v.cwiseAbs().maxCoeff() > 1.0 + std::max(tol.eq, 1e-9)) {
      fail(ErrorKind::numerical, "Gram vector has an entry of modulus " + std::to_string(v.cwiseAbs().maxCoeff()));
    }
    CVec vc = v;
    for (Index i = 0; i < d; ++i) {
      if (std::abs(vc(i)) > 1.0) vc(i) /= std::abs(vc(i));
    }
    MvOptions inner = opt;
    inner.tol = std::max(opt.tol, 1.0);  // judged on the combined residual below
    const auto part = mv_decompose(vc, inner, rng);
    for (std::size_t j = 0; j < part.atoms.size(); ++j) {
      out.atoms.atoms.push_back(part.atoms[j]);
      out.atoms.weights.push_back(part.weights[j] / static_cast<double>(r));
    }
  }
  out.atoms.residual = out.atoms.recompute_residual();
  if (out.atoms.residual > static_cast<double>(r) * opt.tol) {
    throw NoCertificateError("rank mixture above tolerance", out.atoms.residual);
  }
  return out;
}

inline RankMix rank_r_mix(const CorrelationMatrix& c, Rng& rng) { return rank_r_mix(c, MvOptions{}, rng); }

// -- the real case: sign vectors -----------------------------------------------

struct Z2Membership {
  bool member = false;
  std::vector<Eigen::VectorXi> atoms;  // sign vectors with first entry +1
  std::vector<double> weights;
  double residual = 0.0;
};

/// Decides whether a real correlation matrix is a convex combination of
/// s s^T over sign vectors s, by NNLS over all 2^{d-1} of them.
inline Z2Membership z2_membership(const CMat& c, double tol = 1e-8) {
  const Index d = c.rows();
  if (c.cols() != d || d < 1) fail(ErrorKind::dimension, "matrix must be square");
  if (d > 14) fail(ErrorKind::size, "sign-vector enumeration is limited to d <= 14");
  if (c.imag().cwiseAbs().maxCoeff() > 1e-12 || (c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    fail(ErrorKind::domain, "matrix must be real symmetric");
  }
  const RMat cr = c.real();
  const Index pairs = d * (d - 1) / 2;
  const Index count = Index{1} << (d - 1);
  // Rows: the diagonal (always one) and the upper triangle.
  RMat a(d + pairs, count);
  RVec b(d + pairs);
  for (Index i = 0; i < d; ++i) b(i) = cr(i, i);
  {
    Index p = d;
    for (Index i = 0; i < d; ++i)
      for (Index j = i + 1; j < d; ++j) b(p++) = std::sqrt(2.0) * cr(i, j);
  }
  auto sign_vector = [&](Index mask) {
    Eigen::VectorXi s(d);
    s(0) = 1;
    for (Index i = 1; i < d; ++i) s(i) = (mask >> (i - 1)) & 1 ? -1 : 1;
    return s;
  };
  for (Index mask = 0; mask < count; ++mask) {
    const Eigen::VectorXi s = sign_vector(mask);
    for (Index i = 0; i < d; ++i) a(i, mask) = 1.0;
    Index p = d;
    for (Index i = 0; i < d; ++i)
      for (Index j = i + 1; j < d; ++j) a(p++, mask) = std::sqrt(2.0) * s(i) * s(j);
  }
  const auto fit = nnls(a, b);
  Z2Membership out;
  out.residual = fit.residual;
  out.member = fit.residual <= tol;
  for (Index mask = 0; mask < count; ++mask) {
    if (fit.weights(mask) > 0.0) {
      out.atoms.push_back(sign_vector(mask));
      out.weights.push_back(fit.weights(mask));
    }
  }
  return out;
}

/// mu(s) = 2^{-d} sum_x f(x) (-1)^{s.x}, with x and s as bit masks.
inline RVec walsh_hadamard(const RVec& f) {
  const Index n = f.size();
  if (n < 1 || (n & (n - 1)) != 0) fail(ErrorKind::dimension, "length must be a power of two");
  RVec h = f;
  for (Index len = 1; len < n; len <<= 1) {
    for (Index i = 0; i < n; i += 2 * len) {
      for (Index j = i; j < i + len; ++j) {
        const double u = h(j), v = h(j + len);
        h(j) = u + v;
        h(j + len) = u - v;
      }
    }
  }
  return h / static_cast<double>(n);
}

/// f is positive definite on Z_2^d iff its Walsh-Hadamard transform is
/// nonnegative.
inline bool walsh_pd_check(const RVec& f, double tol = 1e-9) {
  return walsh_hadamard(f).minCoeff() >= -tol;
}

/// f(x) = sum_s mu(s) prod_i s_i^{x_i} for the measure putting half of each
/// atom's weight on s and half on -s.
inline RVec induced_function(const Z2Membership& m, Index d) {
  const Index n = Index{1} << d;
  RVec f = RVec::Zero(n);
  for (std::size_t k = 0; k < m.atoms.size(); ++k) {
    for (Index x = 0; x < n; ++x) {
      int sign = 1;
      for (Index i = 0; i < d; ++i)
        if ((x >> i) & 1) sign *= m.atoms[k](i);
      const int parity = __builtin_popcountll(static_cast<unsigned long long>(x)) & 1;
      // s and -s agree on even x and cancel on odd x.
      f(x) += parity ? 0.0 : m.weights[k] * sign;
    }
  }
  return f;
}

}  // namespace muwork
