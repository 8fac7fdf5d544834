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

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace muwork {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Every stochastic routine takes one of these by reference; nothing in the
/// library owns hidden entropy.
using Rng = std::mt19937_64;

/// Numerical thresholds shared by all modules.
///
/// `eq` is a relative Frobenius tolerance, `psd` is scaled by (1 + |A|_F) in
/// positivity tests and `rank` is relative to the largest eigenvalue or
/// singular value in rank decisions.
struct Tolerances {
  double eq = 1e-9;
  double psd = 1e-9;
  double rank = 1e-10;

  Tolerances scaled(double factor) const { return {eq * factor, psd * factor, rank * factor}; }
};

}  // namespace muwork
