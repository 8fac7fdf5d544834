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

// Random matrices and channels. Every sampler takes the generator explicitly.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "muwork/channel.hpp"

namespace muwork {

/// Complex Gaussian entries with E|z|^2 = 1.
inline CMat ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  CMat g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = cplx(n(rng), n(rng));
  return g;
}

inline RMat gaussian_real(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  RMat g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = n(rng);
  return g;
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// diag(R) moved into Q.
inline CMat haar_unitary(Index n, Rng& rng) {
  Eigen::HouseholderQR<CMat> qr(ginibre(n, n, rng));
  CMat q = qr.householderQ();
  const CMat& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    q.col(j) *= a > 0.0 ? r(j, j) / a : cplx(1.0);
  }
  return q;
}

/// Random Hermitian matrix with Gaussian entries.
inline CMat random_hermitian(Index n, Rng& rng) { return hermitize(ginibre(n, n, rng)); }

/// Random unital channel: Ginibre Kraus operators pushed to be trace
/// preserving and unital by alternating normalization (operator Sinkhorn).
inline KrausSet random_unital_kraus(Index d, Index count, Rng& rng) {
  if (d < 1 || count < 1) fail(ErrorKind::dimension, "random channel needs d >= 1 and count >= 1");
  std::vector<CMat> ops;
  for (Index i = 0; i < count; ++i) ops.push_back(ginibre(d, d, rng));
  const CMat id = CMat::Identity(d, d);
  for (int it = 0; it < 10000; ++it) {
    CMat s = CMat::Zero(d, d);
    for (const auto& k : ops) s += k.adjoint() * k;
    const CMat sl = inv_sqrt_pd(s);
    for (auto& k : ops) k = k * sl;
    CMat t = CMat::Zero(d, d);
    for (const auto& k : ops) t += k * k.adjoint();
    const CMat tl = inv_sqrt_pd(t);
    for (auto& k : ops) k = tl * k;
    CMat s2 = CMat::Zero(d, d);
    for (const auto& k : ops) s2 += k.adjoint() * k;
    if ((s2 - id).norm() < 1e-14 * d) return KrausSet(d, std::move(ops));
  }
  fail(ErrorKind::non_convergence, "operator Sinkhorn did not converge");
}

inline Channel random_unital_channel(Index d, Index count, Rng& rng) {
  return Channel::from_kraus(random_unital_kraus(d, count, rng));
}

}  // namespace muwork
