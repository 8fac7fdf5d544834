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

// Nonnegative least squares and fully corrective Frank-Wolfe over a growing
// dictionary of atoms.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/QR>

#include "muwork/error.hpp"
#include "muwork/types.hpp"

namespace muwork {

/// Isometric embedding of n x n Hermitian matrices into R^{n^2}: the
/// diagonal, then sqrt(2) Re and sqrt(2) Im of each entry above it.
inline RVec hermitian_to_real(const CMat& h) {
  const Index n = h.rows();
  RVec v(n * n);
  Index p = 0;
  for (Index i = 0; i < n; ++i) v(p++) = h(i, i).real();
  const double s = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      v(p++) = s * h(i, j).real();
      v(p++) = s * h(i, j).imag();
    }
  }
  return v;
}

inline CMat real_to_hermitian(const RVec& v, Index n) {
  if (v.size() != n * n) fail(ErrorKind::dimension, "embedded vector has wrong length");
  CMat h(n, n);
  Index p = 0;
  for (Index i = 0; i < n; ++i) h(i, i) = v(p++);
  const double s = 1.0 / std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      h(i, j) = cplx(s * v(p), s * v(p + 1));
      h(j, i) = std::conj(h(i, j));
      p += 2;
    }
  }
  return h;
}

/// Embedding of vv^* without forming the outer product.
inline RVec outer_to_real(const CVec& v) {
  const Index n = v.size();
  RVec out(n * n);
  Index p = 0;
  for (Index i = 0; i < n; ++i) out(p++) = std::norm(v(i));
  const double s = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const cplx e = v(i) * std::conj(v(j));
      out(p++) = s * e.real();
      out(p++) = s * e.imag();
    }
  }
  return out;
}

struct ConvexFitResult {
  RVec weights;
  double residual = 0.0;
  Index iterations = 0;
  bool converged = false;
  double kkt_violation = 0.0;
};

struct NnlsOptions {
  /// Columns that start in the passive set.
  std::vector<Index> warm_start;
  /// Stationarity threshold on A^T (b - Ax), relative to |A^T b| and |b|.
  double kkt_tol = 1e-12;
};

/// Lawson-Hanson active-set solver for min |Ax - b| subject to x >= 0.
inline ConvexFitResult nnls(const RMat& a, const RVec& b, const NnlsOptions& opt = {}) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (b.size() != m) fail(ErrorKind::dimension, "nnls target length does not match the dictionary");
  if (!a.allFinite() || !b.allFinite()) fail(ErrorKind::domain, "nnls inputs must be finite");
  ConvexFitResult out;
  out.weights = RVec::Zero(n);
  if (n == 0) {
    out.residual = b.norm();
    out.converged = true;
    return out;
  }

  const double scale = std::max(1.0, b.norm()) * std::max(1.0, a.colwise().norm().maxCoeff());
  const double stop_tol = opt.kkt_tol * scale;
  std::vector<char> passive(static_cast<std::size_t>(n), 0);
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  RVec x = RVec::Zero(n);

  auto passive_list = [&] {
    std::vector<Index> p;
    for (Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) p.push_back(j);
    return p;
  };
  // Least squares restricted to the passive columns; nullopt if they are
  // numerically dependent.
  auto solve_passive = [&](const std::vector<Index>& p, RVec& z) -> bool {
    z = RVec::Zero(n);
    if (p.empty()) return true;
    RMat ap(m, static_cast<Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) ap.col(static_cast<Index>(i)) = a.col(p[i]);
    Eigen::ColPivHouseholderQR<RMat> qr(ap);
    qr.setThreshold(1e-13);
    if (qr.rank() < static_cast<Index>(p.size())) return false;
    const RVec sol = qr.solve(b);
    for (std::size_t i = 0; i < p.size(); ++i) z(p[i]) = sol(static_cast<Index>(i));
    return true;
  };
  // Moves x towards z until the passive set gives a strictly positive
  // least-squares solution. Requires x feasible with x_P >= 0.
  auto settle = [&](Index added) -> bool {
    for (Index guard = 0; guard < 4 * n + 8; ++guard) {
      const auto p = passive_list();
      RVec z;
      if (!solve_passive(p, z)) {
        if (added < 0) fail(ErrorKind::numerical, "dependent columns in the passive set");
        passive[static_cast<std::size_t>(added)] = 0;
        return false;
      }
      bool positive = true;
      for (Index j : p) positive = positive && z(j) > 0.0;
      if (positive) {
        x = z;
        return true;
      }
      if (added >= 0 && z(added) <= 0.0 && guard == 0) {
        // The entering column would leave immediately; refuse it.
        passive[static_cast<std::size_t>(added)] = 0;
        return false;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Index j : p) {
        if (z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      const double tiny = 1e-15 * std::max(1.0, x.cwiseAbs().maxCoeff());
      for (Index j : p) {
        if (z(j) <= 0.0 && x(j) <= tiny) {
          x(j) = 0.0;
          passive[static_cast<std::size_t>(j)] = 0;
        }
      }
    }
    fail(ErrorKind::non_convergence, "nnls inner loop did not settle");
  };

  for (Index j : opt.warm_start) {
    if (j < 0 || j >= n) fail(ErrorKind::dimension, "warm-start index out of range");
    passive[static_cast<std::size_t>(j)] = 1;
  }
  if (!opt.warm_start.empty()) settle(-1);

  const Index cap = std::max<Index>(10 * n, 10);
  Index it = 0;
  for (; it < cap; ++it) {
    const RVec w = a.transpose() * (b - a * x);
    Index best = -1;
    double best_w = stop_tol;
    for (Index j = 0; j < n; ++j) {
      const auto sj = static_cast<std::size_t>(j);
      if (!passive[sj] && !blocked[sj] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = 1;
    if (settle(best)) {
      std::fill(blocked.begin(), blocked.end(), 0);
    } else {
      blocked[static_cast<std::size_t>(best)] = 1;
    }
  }
  if (it >= cap) fail(ErrorKind::non_convergence, "nnls exceeded " + std::to_string(cap) + " iterations");

  x = x.cwiseMax(0.0);
  const RVec r = a * x - b;
  const RVec grad = a.transpose() * r;
  double viol = 0.0;
  for (Index j = 0; j < n; ++j) {
    viol = std::max(viol, x(j) > 0.0 ? std::abs(grad(j)) : std::max(0.0, -grad(j)));
  }
  out.weights = x;
  out.residual = r.norm();
  out.iterations = it;
  out.kkt_violation = viol / scale;
  out.converged = out.kkt_violation <= 1e-8;
  return out;
}

/// Columns plus the objects that generated them.
template <class Payload>
struct AtomDictionary {
  Index ambient_dim = 0;
  std::vector<RVec> columns;
  std::vector<Payload> payloads;

  std::size_t size() const { return columns.size(); }
  void add(RVec column, Payload payload) {
    if (column.size() != ambient_dim) fail(ErrorKind::dimension, "atom does not match the ambient dimension");
    if (!column.allFinite()) fail(ErrorKind::domain, "atom has non-finite entries");
    columns.push_back(std::move(column));
    payloads.push_back(std::move(payload));
  }
  RMat matrix() const {
    RMat m(ambient_dim, static_cast<Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) m.col(static_cast<Index>(j)) = columns[j];
    return m;
  }
};

enum class FitStatus { converged, atom_limit, stagnated, round_limit };

inline const char* to_string(FitStatus s) {
  switch (s) {
    case FitStatus::converged: return "converged";
    case FitStatus::atom_limit: return "atom-limit";
    case FitStatus::stagnated: return "stagnated";
    case FitStatus::round_limit: return "round-limit";
  }
  return "unknown";
}

template <class Payload>
struct FrankWolfeResult {
  ConvexFitResult fit;  // weights index into `atoms`
  AtomDictionary<Payload> atoms;
  FitStatus status = FitStatus::round_limit;
  std::vector<double> history;  // residual after every refit
};

struct FrankWolfeOptions {
  double tol = 1e-6;
  /// Upper bound on the dictionary size at any time (pruned atoms free their
  /// slots), hence on the support of the result.
  std::size_t max_atoms = 200;
  std::size_t max_rounds = 5000;
  bool throw_on_stagnation = true;
};

/// Fully corrective Frank-Wolfe: refit all weights by NNLS, drop atoms with
/// zero weight, ask `generate(residual, dictionary)` for new atoms, repeat.
/// `generate` returns (column, payload) pairs; the residual it receives is
/// b - Aw, so useful atoms have a positive inner product with it.
template <class Payload, class Generator>
FrankWolfeResult<Payload> frank_wolfe_fit(const RVec& target, AtomDictionary<Payload> initial, Generator&& generate,
                                          const FrankWolfeOptions& opt = {}) {
  if (target.size() != initial.ambient_dim) fail(ErrorKind::dimension, "target does not match the dictionary");
  if (opt.max_atoms < 1) fail(ErrorKind::precondition, "max_atoms must be >= 1");
  AtomDictionary<Payload> dict{initial.ambient_dim, {}, {}};
  for (std::size_t j = 0; j < initial.size() && j < opt.max_atoms; ++j) {
    dict.add(std::move(initial.columns[j]), std::move(initial.payloads[j]));
  }

  FrankWolfeResult<Payload> res;
  std::vector<Index> warm;
  double prev = std::numeric_limits<double>::infinity();
  int flat_rounds = 0;
  const double slack = 1e-12 * std::max(1.0, target.norm());

  for (std::size_t round = 0; round < opt.max_rounds; ++round) {
    ConvexFitResult fit = nnls(dict.matrix(), target, {warm, 1e-12});
    if (fit.residual > prev + slack) {
      fail(ErrorKind::numerical, "residual increased from " + std::to_string(prev) + " to " + std::to_string(fit.residual));
    }
    // Keep only the support; passive-set round-off (~1e-17) counts as zero.
    const double floor = 1e-13 * (fit.weights.size() > 0 ? fit.weights.maxCoeff() : 0.0);
    AtomDictionary<Payload> kept{dict.ambient_dim, {}, {}};
    std::vector<double> w;
    bool dropped_positive = false;
    for (std::size_t j = 0; j < dict.size(); ++j) {
      const double wj = fit.weights(static_cast<Index>(j));
      if (wj > floor) {
        kept.add(std::move(dict.columns[j]), std::move(dict.payloads[j]));
        w.push_back(wj);
      } else if (wj > 0.0) {
        dropped_positive = true;
      }
    }
    dict = std::move(kept);
    fit.weights = Eigen::Map<RVec>(w.data(), static_cast<Index>(w.size()));
    if (dropped_positive) fit.residual = (target - dict.matrix() * fit.weights).norm();
    res.history.push_back(fit.residual);
    res.fit = fit;
    res.fit.iterations = static_cast<Index>(round + 1);

    if (fit.residual <= opt.tol) {
      res.status = FitStatus::converged;
      break;
    }
    flat_rounds = prev - fit.residual < 1e-14 ? flat_rounds + 1 : 0;
    prev = std::min(prev, fit.residual);
    if (flat_rounds >= 10) {
      res.status = FitStatus::stagnated;
      break;
    }
    if (dict.size() >= opt.max_atoms) {
      res.status = FitStatus::atom_limit;
      break;
    }

    RVec r = target;
    for (std::size_t j = 0; j < dict.size(); ++j) r -= w[j] * dict.columns[j];
    auto fresh = generate(static_cast<const RVec&>(r), static_cast<const AtomDictionary<Payload>&>(dict));
    if (fresh.empty()) {
      res.status = FitStatus::stagnated;
      break;
    }
    warm.clear();
    for (std::size_t j = 0; j < dict.size(); ++j) warm.push_back(static_cast<Index>(j));
    for (auto& [col, payload] : fresh) {
      if (dict.size() >= opt.max_atoms) break;
      dict.add(std::move(col), std::move(payload));
    }
  }
  res.atoms = std::move(dict);
  if (res.status == FitStatus::stagnated && opt.throw_on_stagnation) {
    fail(ErrorKind::stagnation, "Frank-Wolfe stalled at residual " + std::to_string(res.fit.residual));
  }
  return res;
}

}  // namespace muwork
