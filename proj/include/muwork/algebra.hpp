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

// Unital *-subalgebras of M_d.
//
// An algebra is stored in standard form: a unitary W and blocks (m_k, n_k)
// with
//   A  = W (+)_k (M_{m_k} (x) I_{n_k}) W^*
//   A' = W (+)_k (I_{m_k} (x) M_{n_k}) W^*.
// Inside block k the coordinate of e_s (x) e_j is offset_k + s * n_k + j.
// Blocks are ordered by (n, m) descending.

#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muwork/channel.hpp"
#include "muwork/decomposition.hpp"
#include "muwork/named.hpp"
#include "muwork/random.hpp"

namespace muwork {

struct Block {
  Index m = 1;  // multiplicity of the algebra factor
  Index n = 1;  // size of the commutant factor

  Index size() const { return m * n; }
  friend bool operator==(const Block&, const Block&) = default;
};

/// `storage` lists (m, n) with A = (+) M_m (x) I_n. `reduction` swaps the
/// pair so that A reads (+) I_m (x) M_n, as in the reduction to M_{sum m}.
enum class Convention { storage, reduction };

struct CommutantBasis {
  Index d = 0;
  std::vector<CMat> basis;
};

class AlgebraStructure {
 public:
  AlgebraStructure() = default;

  /// Builds the algebra W ((+) M_m (x) I_n) W^* with its canonical basis
  /// W (E_st (x) I_n / sqrt(n)) W^*. Blocks are reordered canonically and the
  /// columns of W are permuted along with them.
  static AlgebraStructure from_standard_form(std::vector<Block> blocks, const CMat& w) {
    require_square(w, "block-diagonalizing unitary");
    if (blocks.empty()) fail(ErrorKind::dimension, "algebra needs at least one block");
    Index total = 0;
    for (const auto& b : blocks) {
      if (b.m < 1 || b.n < 1) fail(ErrorKind::dimension, "block sizes must be >= 1");
      total += b.size();
    }
    if (total != w.rows()) {
      fail(ErrorKind::dimension, "block sizes sum to " + std::to_string(total) + ", unitary is " +
                                     std::to_string(w.rows()) + "x" + std::to_string(w.rows()));
    }
    if (!is_unitary(w, 1e-8)) fail(ErrorKind::precondition, "block-diagonalizing matrix is not unitary");

    std::vector<Index> offsets(blocks.size());
    for (std::size_t k = 1; k < blocks.size(); ++k) offsets[k] = offsets[k - 1] + blocks[k - 1].size();
    std::vector<std::size_t> order(blocks.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (blocks[a].n != blocks[b].n) return blocks[a].n > blocks[b].n;
      return blocks[a].m > blocks[b].m;
    });

    AlgebraStructure out;
    out.d_ = w.rows();
    out.w_ = CMat(out.d_, out.d_);
    Index col = 0;
    for (std::size_t k : order) {
      out.w_.middleCols(col, blocks[k].size()) = w.middleCols(offsets[k], blocks[k].size());
      out.blocks_.push_back(blocks[k]);
      out.offsets_.push_back(col);
      col += blocks[k].size();
    }
    for (std::size_t k = 0; k < out.blocks_.size(); ++k) {
      const Block& b = out.blocks_[k];
      const double s = 1.0 / std::sqrt(static_cast<double>(b.n));
      for (Index p = 0; p < b.m; ++p)
        for (Index q = 0; q < b.m; ++q)
          out.basis_.push_back(out.embed_algebra(k, s * matrix_unit(b.m, p, q)));
    }
    return out;
  }

  /// Standard form with W = I.
  static AlgebraStructure from_blocks(std::vector<Block> blocks) {
    Index d = 0;
    for (const auto& b : blocks) d += b.size();
    return from_standard_form(std::move(blocks), CMat::Identity(d, d));
  }

  static AlgebraStructure scalars(Index d) { return from_blocks({{1, d}}); }
  static AlgebraStructure full(Index d) { return from_blocks({{d, 1}}); }
  static AlgebraStructure diagonal(Index d) { return from_blocks(std::vector<Block>(d, Block{1, 1})); }

  Index dim() const { return d_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::vector<Block> blocks(Convention c) const {
    if (c == Convention::storage) return blocks_;
    std::vector<Block> out;
    for (const auto& b : blocks_) out.push_back({b.n, b.m});
    return out;
  }
  const CMat& unitary() const { return w_; }
  const std::vector<CMat>& basis() const { return basis_; }
  Index offset(std::size_t k) const { return offsets_.at(k); }

  Index r() const { return static_cast<Index>(blocks_.size()); }
  Index r_hat() const {
    return std::count_if(blocks_.begin(), blocks_.end(), [](const Block& b) { return b.n > 1; });
  }
  /// Dimension of the commutant, sum n_k^2.
  Index D() const {
    Index s = 0;
    for (const auto& b : blocks_) s += b.n * b.n;
    return s;
  }
  /// Dimension of the algebra, sum m_k^2.
  Index algebra_dim() const { return static_cast<Index>(basis_.size()); }

  /// W (0 + ... + M (x) I_n + ... + 0) W^* for M in M_{m_k}.
  CMat embed_algebra(std::size_t k, const CMat& m) const {
    const Block& b = blocks_.at(k);
    if (m.rows() != b.m || m.cols() != b.m) fail(ErrorKind::dimension, "algebra element does not match block size");
    return rotate_in(k, kron(m, CMat::Identity(b.n, b.n)));
  }
  /// W (0 + ... + I_m (x) A + ... + 0) W^* for A in M_{n_k}.
  CMat embed_commutant(std::size_t k, const CMat& a) const {
    const Block& b = blocks_.at(k);
    if (a.rows() != b.n || a.cols() != b.n) fail(ErrorKind::dimension, "commutant element does not match block size");
    return rotate_in(k, kron(CMat::Identity(b.m, b.m), a));
  }
  /// W ((+)_k I_m (x) A_k) W^*.
  CMat commutant_element(const std::vector<CMat>& parts) const {
    if (parts.size() != blocks_.size()) fail(ErrorKind::dimension, "one component per block expected");
    CMat inner = CMat::Zero(d_, d_);
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const Block& b = blocks_[k];
      if (parts[k].rows() != b.n || parts[k].cols() != b.n) {
        fail(ErrorKind::dimension, "commutant component has wrong size");
      }
      inner.block(offsets_[k], offsets_[k], b.size(), b.size()) = kron(CMat::Identity(b.m, b.m), parts[k]);
    }
    return w_ * inner * w_.adjoint();
  }
  /// Per-block components A_k of X, read as the average of the m_k
  /// diagonal n_k x n_k sub-blocks of W^* X W. Exact when X is in A'.
  std::vector<CMat> commutant_components(const CMat& x) const {
    const CMat y = w_.adjoint() * x * w_;
    std::vector<CMat> parts;
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const Block& b = blocks_[k];
      CMat a = CMat::Zero(b.n, b.n);
      for (Index s = 0; s < b.m; ++s) a += y.block(offsets_[k] + s * b.n, offsets_[k] + s * b.n, b.n, b.n);
      parts.push_back(a / static_cast<double>(b.m));
    }
    return parts;
  }
  /// Distance from X to A' (relative to max(1, |X|)).
  double commutant_defect(const CMat& x) const {
    return (x - commutant_element(commutant_components(x))).norm() / std::max(1.0, x.norm());
  }
  bool in_commutant(const CMat& x, double tol) const { return commutant_defect(x) <= tol; }

  /// Trace-orthonormal basis of A': W (I_m (x) E_ab / sqrt(m)) W^*.
  CommutantBasis commutant_basis() const {
    CommutantBasis out{d_, {}};
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      const Block& b = blocks_[k];
      const double s = 1.0 / std::sqrt(static_cast<double>(b.m));
      for (Index p = 0; p < b.n; ++p)
        for (Index q = 0; q < b.n; ++q) out.basis.push_back(embed_commutant(k, s * matrix_unit(b.n, p, q)));
    }
    return out;
  }

  /// Orthogonal projection of X onto A in the trace inner product.
  CMat conditional_expectation(const CMat& x) const {
    if (x.rows() != d_ || x.cols() != d_) fail(ErrorKind::dimension, "input does not match algebra");
    CMat y = CMat::Zero(d_, d_);
    for (const auto& b : basis_) y += trace_inner(x, b) * b;
    return y;
  }

 private:
  CMat rotate_in(std::size_t k, const CMat& local) const {
    const Block& b = blocks_[k];
    const auto cols = w_.middleCols(offsets_[k], b.size());
    return cols * local * cols.adjoint();
  }

  Index d_ = 0;
  std::vector<Block> blocks_;
  std::vector<Index> offsets_;
  CMat w_;
  std::vector<CMat> basis_;
};

inline bool same_signature(const AlgebraStructure& a, const AlgebraStructure& b) {
  return a.dim() == b.dim() && a.blocks() == b.blocks();
}

// -- commutants --------------------------------------------------------------

/// Trace-orthonormal basis of {X : K X = X K for every generator}, starting
/// with I / sqrt(d).
inline CommutantBasis commutant(const std::vector<CMat>& generators, Index d, const Tolerances& tol = {}) {
  if (d < 1) fail(ErrorKind::dimension, "commutant needs d >= 1");
  const CMat id = CMat::Identity(d, d);
  std::vector<CMat> raw{id};
  if (generators.empty()) {
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) raw.push_back(matrix_unit(d, i, j));
  } else {
    const Index dd = d * d;
    CMat stacked(static_cast<Index>(generators.size()) * dd, dd);
    Index row = 0;
    for (const auto& k : generators) {
      if (k.rows() != d || k.cols() != d) fail(ErrorKind::dimension, "generator has wrong size");
      // vec(K X) = (K (x) I) vec(X) and vec(X K) = (I (x) K^T) vec(X).
      stacked.middleRows(row, dd) = kron(k, id) - kron(id, k.transpose());
      row += dd;
    }
    const CMat ns = null_space(stacked, tol.rank);
    for (Index c = 0; c < ns.cols(); ++c) raw.push_back(unvec(ns.col(c), d));
  }
  return {d, orthonormalize(raw, 1e-8)};
}

inline CommutantBasis commutant(const std::vector<CMat>& generators) {
  if (generators.empty()) fail(ErrorKind::dimension, "empty generator list needs an explicit dimension");
  return commutant(generators, generators.front().rows());
}

// -- structure recovery ------------------------------------------------------

namespace detail {

inline double span_tolerance(double eq) { return std::max(eq, 1e-9); }

/// Orthonormal columns spanning eigenvalue clusters of a Hermitian matrix.
inline std::optional<std::vector<CMat>> eigen_clusters(const CMat& h, std::size_t expected) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(h));
  const RVec& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  const auto clusters = cluster_sorted(ev, 1e-6 * scale);
  if (clusters.size() != expected) return std::nullopt;
  std::vector<CMat> out;
  for (const auto& c : clusters) out.push_back(es.eigenvectors().middleCols(c.front(), static_cast<Index>(c.size())));
  return out;
}

inline CMat random_real_combination(const std::vector<CMat>& mats, Rng& rng, bool hermitian) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat h = CMat::Zero(mats.front().rows(), mats.front().cols());
  for (const auto& m : mats) h += g(rng) * (hermitian ? hermitize(m) : m);
  return h;
}

inline CMat random_complex_combination(const std::vector<CMat>& mats, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat h = CMat::Zero(mats.front().rows(), mats.front().cols());
  for (const auto& m : mats) h += cplx(g(rng), g(rng)) * m;
  return h;
}

/// One attempt at the standard form; nullopt when a random element had an
/// ambiguous spectrum.
inline std::optional<AlgebraStructure> try_decompose(const std::vector<CMat>& basis, Index d, Rng& rng,
                                                     const Tolerances& tol) {
  // Center: coefficient vectors c with [sum c_i b_i, b_j] = 0 for all j.
  const Index na = static_cast<Index>(basis.size());
  const Index dd = d * d;
  CMat central_map(na * dd, na);
  for (Index i = 0; i < na; ++i) {
    for (Index j = 0; j < na; ++j) {
      const CMat& bi = basis[static_cast<std::size_t>(i)];
      const CMat& bj = basis[static_cast<std::size_t>(j)];
      central_map.block(j * dd, i, dd, 1) = vec(bi * bj - bj * bi);
    }
  }
  const CMat coeffs = null_space(central_map, 1e-8);
  std::vector<CMat> center;
  for (Index c = 0; c < coeffs.cols(); ++c) {
    CMat z = CMat::Zero(d, d);
    for (Index i = 0; i < na; ++i) z += coeffs(i, c) * basis[static_cast<std::size_t>(i)];
    center.push_back(z);
  }
  const std::size_t r = center.size();
  if (r == 0) fail(ErrorKind::not_an_algebra, "empty center");

  auto summands = eigen_clusters(random_real_combination(center, rng, true), r);
  if (!summands) return std::nullopt;

  std::vector<Block> blocks;
  CMat w(d, d);
  Index col = 0;
  for (const CMat& v : *summands) {
    const Index dim_k = v.cols();
    std::vector<CMat> compressed;
    for (const auto& b : basis) compressed.push_back(v.adjoint() * b * v);
    compressed = orthonormalize(compressed, 1e-6);
    const Index rank = static_cast<Index>(compressed.size());
    const Index m = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(rank))));
    if (m * m != rank || dim_k % m != 0) {
      fail(ErrorKind::not_an_algebra,
           "central summand of dimension " + std::to_string(dim_k) + " carries " + std::to_string(rank) +
               " independent elements, not a full matrix block");
    }
    const Index n = dim_k / m;
    CMat g(dim_k, dim_k);
    if (m == 1) {
      g = CMat::Identity(dim_k, dim_k);
    } else {
      auto parts = eigen_clusters(random_real_combination(compressed, rng, true), static_cast<std::size_t>(m));
      if (!parts) return std::nullopt;
      for (const auto& p : *parts) {
        if (p.cols() != n) return std::nullopt;
      }
      // Align the n-dimensional pieces with one another through a generic
      // element, whose (s, 0) blocks are scalar multiples of unitaries.
      const CMat y = random_complex_combination(compressed, rng);
      const CMat& f0 = (*parts)[0];
      for (Index s = 0; s < m; ++s) {
        const CMat& fs = (*parts)[static_cast<std::size_t>(s)];
        const CMat link = fs.adjoint() * y * f0;
        if (link.norm() < 1e-6 * std::max(1.0, y.norm())) return std::nullopt;
        g.middleCols(s * n, n) = fs * polar_unitary(link);
      }
    }
    w.middleCols(col, dim_k) = v * g;
    blocks.push_back({m, n});
    col += dim_k;
  }

  // Polish W to exact unitarity before rebuilding the canonical basis.
  w = polar_unitary(w);
  AlgebraStructure out = AlgebraStructure::from_standard_form(blocks, w);
  if (out.algebra_dim() != na) return std::nullopt;
  const double tol_span = span_tolerance(tol.eq) * std::sqrt(static_cast<double>(d));
  for (const auto& b : basis) {
    if (distance_to_span(b, out.basis()) > tol_span) return std::nullopt;
  }
  return out;
}

}  // namespace detail

/// Recovers the standard form of the *-algebra spanned by `basis`: split by
/// the center, then split each central summand into its tensor factors.
inline AlgebraStructure decompose_algebra(const std::vector<CMat>& basis, Rng& rng, const Tolerances& tol = {}) {
  if (basis.empty()) fail(ErrorKind::not_an_algebra, "empty basis");
  const Index d = basis.front().rows();
  for (const auto& b : basis) {
    if (b.rows() != d || b.cols() != d) fail(ErrorKind::dimension, "basis elements must be d x d");
  }
  const std::vector<CMat> ortho = orthonormalize(basis, 1e-8);
  const double tol_span = detail::span_tolerance(tol.eq) * std::sqrt(static_cast<double>(d));
  if (distance_to_span(CMat::Identity(d, d), ortho) > tol_span) {
    fail(ErrorKind::not_an_algebra, "span does not contain the identity");
  }
  for (const auto& a : ortho) {
    if (distance_to_span(a.adjoint(), ortho) > tol_span) fail(ErrorKind::not_an_algebra, "span is not closed under adjoints");
    for (const auto& b : ortho) {
      if (distance_to_span(a * b, ortho) > tol_span) {
        fail(ErrorKind::not_an_algebra, "span is not closed under multiplication");
      }
    }
  }
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (auto out = detail::try_decompose(ortho, d, rng, tol)) return *out;
  }
  fail(ErrorKind::structure, "could not separate the block structure after 8 random elements");
}

inline AlgebraStructure decompose_algebra(const std::vector<CMat>& basis, const Tolerances& tol = {}) {
  Rng rng(0x5eed);
  return decompose_algebra(basis, rng, tol);
}

/// Fix(phi) for a unital channel, which is the commutant of its Kraus set.
inline AlgebraStructure fixed_point_algebra(const Channel& phi, Rng& rng, const Tolerances& tol = {}) {
  if (!phi.is_unital()) fail(ErrorKind::precondition, "fixed-point algebra needs a unital channel");
  if (!phi.is_trace_preserving()) fail(ErrorKind::precondition, "fixed-point algebra needs a trace-preserving channel");
  const Index d = phi.dim();
  std::vector<CMat> gens;
  for (const auto& k : phi.kraus().ops()) {
    gens.push_back(k);
    gens.push_back(k.adjoint());
  }
  const CommutantBasis comm = commutant(gens, d, tol);
  const CMat eig_one = null_space(phi.transfer() - CMat::Identity(d * d, d * d), 1e-8);
  if (eig_one.cols() != static_cast<Index>(comm.basis.size())) {
    fail(ErrorKind::numerical, "commutant of the Kraus set has dimension " + std::to_string(comm.basis.size()) +
                                   " but the eigenvalue-1 space has dimension " + std::to_string(eig_one.cols()));
  }
  return decompose_algebra(comm.basis, rng, tol);
}

inline AlgebraStructure fixed_point_algebra(const Channel& phi, const Tolerances& tol = {}) {
  Rng rng(0x5eed);
  return fixed_point_algebra(phi, rng, tol);
}

inline bool fixes_algebra(const Channel& phi, const AlgebraStructure& a, double tol) {
  if (phi.dim() != a.dim()) return false;
  for (const auto& b : a.basis()) {
    if ((phi.apply(b) - b).norm() > tol * std::max(1.0, b.norm())) return false;
  }
  return true;
}

// -- maps attached to an algebra ---------------------------------------------

inline CMat conditional_expectation(const AlgebraStructure& a, const CMat& x) { return a.conditional_expectation(x); }

/// E_A as a channel, with Kraus operators W (I_m (x) E_ab / sqrt(n)) W^*.
inline Channel condexp_channel(const AlgebraStructure& a) {
  std::vector<CMat> ops;
  for (std::size_t k = 0; k < a.blocks().size(); ++k) {
    const Block& b = a.blocks()[k];
    const double s = 1.0 / std::sqrt(static_cast<double>(b.n));
    for (Index p = 0; p < b.n; ++p)
      for (Index q = 0; q < b.n; ++q) ops.push_back(a.embed_commutant(k, s * matrix_unit(b.n, p, q)));
  }
  return Channel::from_kraus(KrausSet(a.dim(), std::move(ops)));
}

/// <U, V> = sum_k n_k Tr(U_k^* V_k) over the block components of U, V in A'.
inline cplx weighted_inner_product(const AlgebraStructure& a, const CMat& u, const CMat& v, double tol = 1e-9) {
  if (u.rows() != a.dim() || v.rows() != a.dim()) fail(ErrorKind::dimension, "arguments do not match algebra");
  const auto pu = a.commutant_components(u);
  const auto pv = a.commutant_components(v);
  if ((u - a.commutant_element(pu)).norm() > tol * std::max(1.0, u.norm()) ||
      (v - a.commutant_element(pv)).norm() > tol * std::max(1.0, v.norm())) {
    fail(ErrorKind::domain, "argument of the weighted inner product is not in the commutant");
  }
  cplx s = 0.0;
  for (std::size_t k = 0; k < pu.size(); ++k) {
    s += static_cast<double>(a.blocks()[k].n) * (pu[k].adjoint() * pv[k]).trace();
  }
  return s;
}

/// Haar-random unitary in A', sampled independently per block.
inline CMat haar_commutant_unitary(const AlgebraStructure& a, Rng& rng) {
  std::vector<CMat> parts;
  for (const auto& b : a.blocks()) parts.push_back(haar_unitary(b.n, rng));
  return a.commutant_element(parts);
}

/// Nearest-unitary projection onto U(A'): average the m_k copies of each
/// block, then take the polar factor.
inline CMat project_commutant_unitary(const AlgebraStructure& a, const CMat& x) {
  auto parts = a.commutant_components(x);
  for (auto& p : parts) p = polar_unitary(p);
  return a.commutant_element(parts);
}

/// A random unital channel whose Kraus operators lie in A', so that A is
/// contained in its fixed points.
inline Channel random_channel_fixing(const AlgebraStructure& a, Index kraus_count, Rng& rng) {
  std::vector<KrausSet> per_block;
  for (const auto& b : a.blocks()) per_block.push_back(random_unital_kraus(b.n, kraus_count, rng));
  std::vector<CMat> ops;
  for (Index i = 0; i < kraus_count; ++i) {
    std::vector<CMat> parts;
    for (const auto& ks : per_block) parts.push_back(ks[static_cast<std::size_t>(i)]);
    ops.push_back(a.commutant_element(parts));
  }
  return Channel::from_kraus(KrausSet(a.dim(), std::move(ops)));
}

/// Per-block Kraus operators of phi, K_i = W ((+) I_m (x) K_ik) W^*.
inline std::vector<std::vector<CMat>> block_kraus(const Channel& phi, const AlgebraStructure& a, double tol) {
  std::vector<std::vector<CMat>> out(a.blocks().size());
  for (const auto& k : phi.kraus().ops()) {
    auto parts = a.commutant_components(k);
    if ((k - a.commutant_element(parts)).norm() > tol * std::max(1.0, k.norm())) {
      fail(ErrorKind::structure, "Kraus operator is not block-scalar on the algebra factor");
    }
    for (std::size_t b = 0; b < parts.size(); ++b) out[b].push_back(std::move(parts[b]));
  }
  return out;
}

/// Reduction of a channel fixing A to the channel on M_{sum n_k} with Kraus
/// operators (+)_k K_ik. Multiplicative, injective and preserves unitary
/// conjugations in both directions.
inline Channel reduce_channel(const Channel& phi, const AlgebraStructure& a, const Tolerances& tol = {}) {
  if (phi.dim() != a.dim()) fail(ErrorKind::dimension, "channel and algebra dimensions differ");
  if (!fixes_algebra(phi, a, std::max(tol.eq, 1e-9))) fail(ErrorKind::precondition, "algebra is not fixed by the channel");
  const auto parts = block_kraus(phi, a, std::max(tol.eq, 1e-9));
  Index total = 0;
  for (const auto& b : a.blocks()) total += b.n;
  std::vector<CMat> ops;
  for (std::size_t i = 0; i < phi.kraus().ops().size(); ++i) {
    std::vector<CMat> diag;
    for (const auto& p : parts) diag.push_back(p[i]);
    ops.push_back(block_diag(diag));
  }
  return Channel::from_kraus(KrausSet(total, std::move(ops)), tol);
}

/// Finite mixed-unitary realization of E_A: block phases w^{jk} (w a q-th
/// root of unity, q = max(r, 2)) times per-block clock-and-shift unitaries,
/// uniformly weighted over every combination.
inline MixedUnitaryDecomposition condexp_as_mixed_unitary(const AlgebraStructure& a) {
  const std::size_t r = a.blocks().size();
  const Index q = r > 1 ? std::max<Index>(static_cast<Index>(r), 2) : 1;
  std::vector<std::vector<CMat>> wh;
  std::size_t combos = 1;
  for (const auto& b : a.blocks()) {
    wh.push_back(weyl_heisenberg(b.n));
    combos *= wh.back().size();
  }
  std::vector<CMat> atoms;
  for (Index j = 0; j < q; ++j) {
    for (std::size_t c = 0; c < combos; ++c) {
      std::size_t rest = c;
      std::vector<CMat> parts(r);
      for (std::size_t k = r; k-- > 0;) {
        const std::size_t pick = rest % wh[k].size();
        rest /= wh[k].size();
        parts[k] = root_of_unity(q, j * static_cast<Index>(k)) * wh[k][pick];
      }
      atoms.push_back(a.commutant_element(parts));
    }
  }
  std::vector<double> weights(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  return make_decomposition(std::move(weights), std::move(atoms), condexp_channel(a).choi());
}

/// Every atom of `dec` commutes with A (lies in A') to `tol`.
inline bool atoms_in_commutant(const MixedUnitaryDecomposition& dec, const AlgebraStructure& a, double tol) {
  return std::all_of(dec.unitaries.begin(), dec.unitaries.end(),
                     [&](const CMat& u) { return a.in_commutant(u, tol); });
}

}  // namespace muwork
