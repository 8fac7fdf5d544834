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

#pragma once

#include <numeric>
#include <vector>

#include "muwork/channel.hpp"

namespace muwork {

/// X -> sum_i w_i U_i X U_i^*, certified against a target by the Frobenius
/// distance between Choi matrices.
struct MixedUnitaryDecomposition {
  std::vector<double> weights;
  std::vector<CMat> unitaries;
  ChoiMatrix target;
  double residual = 0.0;

  std::size_t size() const { return weights.size(); }
  double weight_sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }
  CMat reconstructed_choi() const { return mixed_unitary_choi(weights, unitaries); }
  double recompute_residual() const { return (reconstructed_choi() - target.mat).norm(); }
  Channel as_channel() const { return Channel::from_choi({target.dim, reconstructed_choi()}); }
};

/// Builds a decomposition and fills in its residual.
inline MixedUnitaryDecomposition make_decomposition(std::vector<double> weights,
                                                    std::vector<CMat> unitaries,
                                                    ChoiMatrix target) {
  MixedUnitaryDecomposition out{std::move(weights), std::move(unitaries), std::move(target), 0.0};
  out.residual = out.recompute_residual();
  return out;
}

/// Structural checks shared by every producer: nonnegative weights summing
/// to one, unitary atoms and the stored residual matching a recomputation.
inline bool is_well_formed(const MixedUnitaryDecomposition& dec, double tol = 1e-8) {
  if (dec.weights.size() != dec.unitaries.size()) return false;
  for (double w : dec.weights) {
    if (!(w >= 0.0)) return false;
  }
  if (std::abs(dec.weight_sum() - 1.0) > tol) return false;
  for (const auto& u : dec.unitaries) {
    if (!is_unitary(u, 1e-9)) return false;
  }
  return std::abs(dec.recompute_residual() - dec.residual) <= 1e-12 + 1e-9 * dec.residual;
}

}  // namespace muwork
