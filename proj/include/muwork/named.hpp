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

// Standard channels used as fixtures and building blocks.

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "muwork/channel.hpp"

namespace muwork {

inline CMat matrix_unit(Index d, Index i, Index j) {
  CMat e = CMat::Zero(d, d);
  e(i, j) = 1.0;
  return e;
}

inline void require_positive_dim(Index d) {
  if (d < 1) fail(ErrorKind::dimension, "dimension must be >= 1");
}

inline Channel identity_channel(Index d) {
  require_positive_dim(d);
  return Channel::from_kraus(KrausSet(d, {CMat::Identity(d, d)}));
}

inline Channel unitary_channel(const CMat& u) {
  require_square(u, "unitary");
  return Channel::from_kraus(KrausSet(u.rows(), {u}));
}

/// X -> Tr(X) I / d, with the d^2 scaled matrix units as Kraus operators.
inline Channel depolarizing(Index d) {
  require_positive_dim(d);
  std::vector<CMat> ops;
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) ops.push_back(s * matrix_unit(d, i, j));
  return Channel::from_kraus(KrausSet(d, std::move(ops)));
}

/// X -> (Tr(X) I - X^T) / 2 on M_3. Unital and trace preserving but not
/// mixed unitary.
inline Channel werner_holevo3() {
  std::vector<CMat> ops;
  const double s = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < 3; ++i)
    for (Index j = i + 1; j < 3; ++j) ops.push_back(s * (matrix_unit(3, i, j) - matrix_unit(3, j, i)));
  return Channel::from_kraus(KrausSet(3, std::move(ops)));
}

/// Kills off-diagonal entries.
inline Channel map_to_diagonal(Index d) {
  require_positive_dim(d);
  std::vector<CMat> ops;
  for (Index i = 0; i < d; ++i) ops.push_back(matrix_unit(d, i, i));
  return Channel::from_kraus(KrausSet(d, std::move(ops)));
}

inline cplx root_of_unity(Index n, Index k) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
  return std::polar(1.0, angle);
}

/// Clock-and-shift unitaries S^a D^b for a, b in 0..d-1 (a-major order).
/// S e_j = e_{j+1 mod d} and D = diag(w^0, ..., w^{d-1}) with w = exp(2 pi i/d).
inline std::vector<CMat> weyl_heisenberg(Index d) {
  require_positive_dim(d);
  CMat shift = CMat::Zero(d, d);
  CMat clock = CMat::Zero(d, d);
  for (Index j = 0; j < d; ++j) {
    shift((j + 1) % d, j) = 1.0;
    clock(j, j) = root_of_unity(d, j);
  }
  std::vector<CMat> out;
  out.reserve(static_cast<std::size_t>(d * d));
  CMat sa = CMat::Identity(d, d);
  for (Index a = 0; a < d; ++a) {
    CMat op = sa;
    for (Index b = 0; b < d; ++b) {
      out.push_back(op);
      op = op * clock;
    }
    sa = shift * sa;
  }
  return out;
}

}  // namespace muwork
