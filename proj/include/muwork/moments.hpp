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

// Second moments of the unitary group: exact averages over finite designs
// and Haar Monte-Carlo estimates.

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "muwork/channel.hpp"
#include "muwork/named.hpp"
#include "muwork/random.hpp"

namespace muwork {

/// The 24 single-qubit Cliffords modulo phase, generated by H and S. Each
/// representative is scaled so its first nonzero entry is real positive.
inline std::vector<CMat> clifford_group_1q() {
  const double s = 1.0 / std::sqrt(2.0);
  CMat h(2, 2);
  h << s, s, s, -s;
  CMat p(2, 2);
  p << 1.0, 0.0, 0.0, cplx(0.0, 1.0);
  auto normalize = [](CMat u) {
    for (Index k = 0; k < u.size(); ++k) {
      if (std::abs(u(k)) > 1e-9) {
        u *= std::conj(u(k)) / std::abs(u(k));
        break;
      }
    }
    return u;
  };
  std::vector<CMat> group{CMat::Identity(2, 2)};
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const CMat& g : {h, p}) {
      const CMat c = normalize(g * group[i]);
      bool seen = false;
      for (const auto& e : group) seen = seen || (e - c).norm() < 1e-9;
      if (!seen) group.push_back(c);
    }
  }
  return group;
}

/// sum_i w_i vec(U_i) vec(U_i)^*. Haar value: I / d.
inline CMat projector_moment(const std::vector<CMat>& unitaries, const std::vector<double>& weights) {
  if (unitaries.empty() || unitaries.size() != weights.size()) fail(ErrorKind::dimension, "need one weight per unitary");
  const Index d = unitaries.front().rows();
  CMat acc = CMat::Zero(d * d, d * d);
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    const CVec v = vec(unitaries[i]);
    acc.noalias() += weights[i] * (v * v.adjoint());
  }
  return acc;
}

/// sum_i w_i U_i (x) U_i^*. Haar value: (1/d) sum_ij E_ij (x) E_ji.
inline CMat adjoint_moment(const std::vector<CMat>& unitaries, const std::vector<double>& weights) {
  if (unitaries.empty() || unitaries.size() != weights.size()) fail(ErrorKind::dimension, "need one weight per unitary");
  const Index d = unitaries.front().rows();
  CMat acc = CMat::Zero(d * d, d * d);
  for (std::size_t i = 0; i < unitaries.size(); ++i) acc.noalias() += weights[i] * kron(unitaries[i], unitaries[i].adjoint());
  return acc;
}

inline CMat projector_moment_haar(Index d) {
  return CMat::Identity(d * d, d * d) / static_cast<double>(d);
}

inline CMat adjoint_moment_haar(Index d) {
  CMat out = CMat::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) out.noalias() += kron(matrix_unit(d, i, j), matrix_unit(d, j, i));
  return out / static_cast<double>(d);
}

inline std::vector<double> uniform_weights(std::size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

inline std::vector<CMat> haar_sample(Index d, Index n, Rng& rng) {
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out.push_back(haar_unitary(d, rng));
  return out;
}

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo estimate of the Haar integral of |Tr(U X^*)|^2, whose exact
/// value is Tr(X^* X) / d.
inline MeanEstimate trace_square_estimate(const CMat& x, Index samples, Rng& rng) {
  if (samples < 2) fail(ErrorKind::domain, "need at least two samples");
  const Index d = x.rows();
  double sum = 0.0, sum_sq = 0.0;
  for (Index s = 0; s < samples; ++s) {
    const double v = std::norm((haar_unitary(d, rng) * x.adjoint()).trace());
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

}  // namespace muwork
