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

// Completely positive maps on M_d in three coordinate systems.
//
// Conventions (used everywhere in the library):
//   vec(X)[i*d + j] = X(i, j)                 so vec(E_ij) = e_i (x) e_j
//   choi  J = sum_i vec(K_i) vec(K_i)^*
//   transfer T with T vec(X) = vec(Phi(X)),  T = sum_i K_i (x) conj(K_i)
// The two d^2 x d^2 matrices are related by the index reshuffle
//   T[(k,l),(i,j)] = J[(k,i),(l,j)].

#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "muwork/error.hpp"
#include "muwork/linalg.hpp"
#include "muwork/types.hpp"

namespace muwork {

inline CVec vec(const CMat& x) {
  require_square(x, "vec input");
  const Index d = x.rows();
  CVec v(d * d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) v(i * d + j) = x(i, j);
  }
  return v;
}

inline CMat unvec(const CVec& v, Index d) {
  if (v.size() != d * d) fail(ErrorKind::dimension, "unvec length is not d^2");
  CMat x(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) x(i, j) = v(i * d + j);
  }
  return x;
}

/// Swaps between choi and transfer coordinates (the map is an involution).
inline CMat reshuffle(const CMat& m, Index d) {
  if (m.rows() != d * d || m.cols() != d * d) fail(ErrorKind::dimension, "reshuffle needs d^2 x d^2");
  CMat out(d * d, d * d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b)
      for (Index c = 0; c < d; ++c)
        for (Index e = 0; e < d; ++e) out(a * d + b, c * d + e) = m(a * d + c, b * d + e);
  return out;
}

/// Kraus operators of a completely positive map, all d x d.
class KrausSet {
 public:
  KrausSet() = default;
  KrausSet(Index dim, std::vector<CMat> ops) : dim_(dim), ops_(std::move(ops)) { validate(); }
  // Dimension read from the first operator; members initialize in order, so
  // dim_ is taken before ops is moved from.
  explicit KrausSet(std::vector<CMat> ops)
      : dim_(ops.empty() ? 0 : ops.front().rows()), ops_(std::move(ops)) {
    validate();
  }

  Index dim() const { return dim_; }
  Index size() const { return static_cast<Index>(ops_.size()); }
  const std::vector<CMat>& ops() const { return ops_; }
  const CMat& operator[](std::size_t i) const { return ops_[i]; }

  CMat sum_left() const {  // sum K* K
    CMat s = CMat::Zero(dim_, dim_);
    for (const auto& k : ops_) s += k.adjoint() * k;
    return s;
  }
  CMat sum_right() const {  // sum K K*
    CMat s = CMat::Zero(dim_, dim_);
    for (const auto& k : ops_) s += k * k.adjoint();
    return s;
  }

 private:
  void validate() const {
    if (dim_ < 1) fail(ErrorKind::dimension, "Kraus dimension must be >= 1");
    for (const auto& k : ops_) {
      if (k.rows() != dim_ || k.cols() != dim_) {
        fail(ErrorKind::dimension, "Kraus operator is " + std::to_string(k.rows()) + "x" +
                                       std::to_string(k.cols()) + ", expected " +
                                       std::to_string(dim_) + "x" + std::to_string(dim_));
      }
      if (!k.allFinite()) fail(ErrorKind::domain, "Kraus operator has non-finite entries");
    }
  }

  Index dim_ = 0;
  std::vector<CMat> ops_;
};

struct ChoiMatrix {
  Index dim = 0;
  CMat mat;
};

inline ChoiMatrix choi_of(const KrausSet& kraus) {
  const Index d = kraus.dim();
  CMat j = CMat::Zero(d * d, d * d);
  for (const auto& k : kraus.ops()) {
    const CVec v = vec(k);
    j.noalias() += v * v.adjoint();
  }
  return {d, j};
}

/// Canonical Kraus form: eigenvectors of the Hermitized Choi matrix with
/// weights in descending order, dropping eigenvalues <= rank * lambda_max.
inline KrausSet kraus_of_choi(const ChoiMatrix& choi, const Tolerances& tol = {}) {
  const Index d = choi.dim;
  if (choi.mat.rows() != d * d || choi.mat.cols() != d * d) {
    fail(ErrorKind::dimension, "Choi matrix must be d^2 x d^2");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(choi.mat));
  const RVec& ev = es.eigenvalues();
  const double lmax = ev(ev.size() - 1);
  if (ev(0) < -tol.psd * (1.0 + choi.mat.norm())) {
    fail(ErrorKind::not_completely_positive,
         "Choi matrix has eigenvalue " + std::to_string(ev(0)));
  }
  std::vector<CMat> ops;
  if (lmax <= 0.0) return KrausSet(d, ops);
  for (Index i = ev.size() - 1; i >= 0; --i) {
    if (ev(i) <= tol.rank * lmax) break;
    ops.push_back(std::sqrt(ev(i)) * unvec(es.eigenvectors().col(i), d));
  }
  return KrausSet(d, std::move(ops));
}

/// A completely positive map on M_d with its Kraus, Choi and transfer
/// matrices. Instances are immutable; every operation returns a new value.
class Channel {
 public:
  static Channel from_kraus(KrausSet kraus, const Tolerances& tol = {}) {
    ChoiMatrix j = choi_of(kraus);
    return Channel(std::move(kraus), std::move(j), tol);
  }
  static Channel from_kraus(std::vector<CMat> ops, const Tolerances& tol = {}) {
    if (ops.empty()) fail(ErrorKind::dimension, "empty Kraus list without a dimension");
    return from_kraus(KrausSet(std::move(ops)), tol);
  }
  static Channel from_choi(const ChoiMatrix& choi, const Tolerances& tol = {}) {
    KrausSet k = kraus_of_choi(choi, tol);
    return Channel(std::move(k), ChoiMatrix{choi.dim, hermitize(choi.mat)}, tol);
  }
  static Channel from_transfer(const CMat& transfer, Index d, const Tolerances& tol = {}) {
    return from_choi({d, reshuffle(transfer, d)}, tol);
  }

  Index dim() const { return kraus_.dim(); }
  const KrausSet& kraus() const { return kraus_; }
  const ChoiMatrix& choi() const { return choi_; }
  const CMat& transfer() const { return transfer_; }
  bool is_unital() const { return unital_; }
  bool is_trace_preserving() const { return trace_preserving_; }
  bool is_unital_channel() const { return unital_ && trace_preserving_; }

  CMat apply(const CMat& x) const {
    check_input(x);
    CMat y = CMat::Zero(dim(), dim());
    for (const auto& k : kraus_.ops()) y.noalias() += k * x * k.adjoint();
    return y;
  }
  CMat apply_via_transfer(const CMat& x) const {
    check_input(x);
    return unvec(transfer_ * vec(x), dim());
  }
  CMat apply_via_choi(const CMat& x) const {
    check_input(x);
    const Index d = dim();
    CMat y = CMat::Zero(d, d);
    for (Index k = 0; k < d; ++k)
      for (Index l = 0; l < d; ++l)
        for (Index i = 0; i < d; ++i)
          for (Index j = 0; j < d; ++j) y(k, l) += choi_.mat(k * d + i, l * d + j) * x(i, j);
    return y;
  }

  /// Same map with the canonical (Choi eigenbasis) Kraus operators.
  Channel canonical(const Tolerances& tol = {}) const { return from_choi(choi_, tol); }

 private:
  Channel(KrausSet kraus, ChoiMatrix choi, const Tolerances& tol)
      : kraus_(std::move(kraus)), choi_(std::move(choi)) {
    const Index d = kraus_.dim();
    transfer_ = reshuffle(choi_.mat, d);
    const CMat id = CMat::Identity(d, d);
    unital_ = approx_equal(kraus_.sum_right(), id, tol.eq);
    trace_preserving_ = approx_equal(kraus_.sum_left(), id, tol.eq);
  }
  void check_input(const CMat& x) const {
    if (x.rows() != dim() || x.cols() != dim()) {
      fail(ErrorKind::dimension, "input is " + std::to_string(x.rows()) + "x" +
                                     std::to_string(x.cols()) + ", channel acts on M_" +
                                     std::to_string(dim()));
    }
  }

  KrausSet kraus_;
  ChoiMatrix choi_;
  CMat transfer_;
  bool unital_ = false;
  bool trace_preserving_ = false;
};

inline bool same_map(const Channel& a, const Channel& b, double tol) {
  return a.dim() == b.dim() && approx_equal(a.transfer(), b.transfer(), tol);
}

inline Channel dual(const Channel& phi, const Tolerances& tol = {}) {
  std::vector<CMat> ops;
  for (const auto& k : phi.kraus().ops()) ops.push_back(k.adjoint());
  return Channel::from_kraus(KrausSet(phi.dim(), std::move(ops)), tol);
}

namespace detail {
inline Channel from_kraus_truncated(Index d, std::vector<CMat> ops, const Tolerances& tol) {
  const bool too_many = static_cast<Index>(ops.size()) > d * d;
  Channel c = Channel::from_kraus(KrausSet(d, std::move(ops)), tol);
  return too_many ? c.canonical(tol) : c;
}
}  // namespace detail

/// phi after psi, i.e. X -> phi(psi(X)).
inline Channel compose(const Channel& phi, const Channel& psi, const Tolerances& tol = {}) {
  if (phi.dim() != psi.dim()) fail(ErrorKind::dimension, "compose needs equal dimensions");
  std::vector<CMat> ops;
  for (const auto& k : phi.kraus().ops())
    for (const auto& l : psi.kraus().ops()) ops.push_back(k * l);
  return detail::from_kraus_truncated(phi.dim(), std::move(ops), tol);
}

inline Channel convex_combine(const std::vector<std::pair<double, Channel>>& terms,
                              const Tolerances& tol = {}) {
  if (terms.empty()) fail(ErrorKind::invalid_mixture, "empty mixture");
  const Index d = terms.front().second.dim();
  double total = 0.0;
  std::vector<CMat> ops;
  for (const auto& [p, phi] : terms) {
    if (phi.dim() != d) fail(ErrorKind::dimension, "mixture of channels on different spaces");
    if (p < -tol.eq) fail(ErrorKind::invalid_mixture, "negative weight " + std::to_string(p));
    total += p;
    if (p <= 0.0) continue;
    for (const auto& k : phi.kraus().ops()) ops.push_back(std::sqrt(p) * k);
  }
  if (std::abs(total - 1.0) > tol.eq) {
    fail(ErrorKind::invalid_mixture, "weights sum to " + std::to_string(total));
  }
  if (ops.empty()) ops.push_back(CMat::Zero(d, d));
  return detail::from_kraus_truncated(d, std::move(ops), tol);
}

/// phi^k by repeated squaring of the transfer matrix.
inline Channel power(const Channel& phi, int k, const Tolerances& tol = {}) {
  if (k < 1) fail(ErrorKind::precondition, "power needs k >= 1");
  if (k == 1) return phi;
  const Index n = phi.transfer().rows();
  CMat result = CMat::Identity(n, n);
  CMat base = phi.transfer();
  for (int e = k; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  return Channel::from_transfer(result, phi.dim(), tol);
}

/// Evaluates X -> sum_i lambda_i U_i X U_i^* as a Choi matrix.
inline CMat mixed_unitary_choi(const std::vector<double>& weights, const std::vector<CMat>& unitaries) {
  if (weights.size() != unitaries.size() || unitaries.empty()) {
    fail(ErrorKind::dimension, "weights and unitaries must be non-empty and of equal length");
  }
  const Index d = unitaries.front().rows();
  CMat j = CMat::Zero(d * d, d * d);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const CVec v = vec(unitaries[i]);
    j.noalias() += weights[i] * (v * v.adjoint());
  }
  return j;
}

}  // namespace muwork
