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

// Mixing constants for channels fixing an algebra A: p with
// p Phi + (1 - p) E_A mixed unitary for every unital Phi fixing A, the
// twirl map L behind them, and explicit decompositions.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muwork/algebra.hpp"
#include "muwork/channel.hpp"
#include "muwork/convex.hpp"
#include "muwork/decomposition.hpp"
#include "muwork/named.hpp"

namespace muwork {

enum class MixingBranch { trivial, r1, general };

inline const char* to_string(MixingBranch b) {
  switch (b) {
    case MixingBranch::trivial: return "trivial";
    case MixingBranch::r1: return "r1";
    case MixingBranch::general: return "general";
  }
  return "unknown";
}

/// p = numerator / denominator, exact.
struct MixingCertificate {
  AlgebraStructure algebra;
  MixingBranch branch = MixingBranch::trivial;
  long long numerator = 1;
  long long denominator = 1;

  double p() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  double coefficient_on_E() const {
    return static_cast<double>(denominator - numerator) / static_cast<double>(denominator);
  }
};

/// The guaranteed constant: 1 if A' is trivial, 1/(n^2 - 1) for a single
/// block with n > 1, otherwise 1/(D - r_hat + sum_{n_k > 1} n_k^2).
inline MixingCertificate mixing_constant(const AlgebraStructure& a) {
  MixingCertificate c;
  c.algebra = a;
  if (a.r() == 1) {
    const long long n = a.blocks().front().n;
    if (n == 1) {
      c.branch = MixingBranch::trivial;
      return c;
    }
    c.branch = MixingBranch::r1;
    c.denominator = n * n - 1;
    return c;
  }
  long long den = a.D() - a.r_hat();
  for (const auto& b : a.blocks()) {
    if (b.n > 1) den += b.n * b.n;
  }
  c.branch = MixingBranch::general;
  c.denominator = den;
  return c;
}

/// p Phi + (1 - p) delta_d.
inline Channel watrous_mix(const Channel& phi, double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::domain, "mixing weight must lie in [0, 1]");
  if (!phi.is_unital_channel()) fail(ErrorKind::precondition, "Watrous mixing needs a unital channel");
  return convex_combine({{p, phi}, {1.0 - p, depolarizing(phi.dim())}});
}

/// p Phi + (1 - p) E_A at the certified p for A.
inline std::pair<Channel, MixingCertificate> general_mix(const Channel& phi, const AlgebraStructure& a,
                                                         const Tolerances& tol = {}) {
  if (!fixes_algebra(phi, a, std::max(tol.eq, 1e-9))) fail(ErrorKind::precondition, "algebra is not fixed by the channel");
  MixingCertificate cert = mixing_constant(a);
  Channel mixed = convex_combine({{cert.p(), phi}, {cert.coefficient_on_E(), condexp_channel(a)}}, tol);
  return {std::move(mixed), std::move(cert)};
}

// -- block pieces ------------------------------------------------------------

inline void check_block_index(const AlgebraStructure& a, std::size_t k) {
  if (k >= a.blocks().size()) {
    fail(ErrorKind::dimension, "block index " + std::to_string(k) + " out of range (" +
                                   std::to_string(a.blocks().size()) + " blocks)");
  }
}

/// The channel on M_{n_k} with Kraus operators K_ik.
inline Channel restrict_block(const Channel& phi, const AlgebraStructure& a, std::size_t k, const Tolerances& tol = {}) {
  check_block_index(a, k);
  auto parts = block_kraus(phi, a, std::max(tol.eq, 1e-9));
  return Channel::from_kraus(KrausSet(a.blocks()[k].n, std::move(parts[k])), tol);
}

/// Kraus operators I_m (x) K_i on block k and zero elsewhere. Completely
/// positive but not trace preserving unless A has a single block.
inline Channel hat_embed(const Channel& phi_k, const AlgebraStructure& a, std::size_t k) {
  check_block_index(a, k);
  if (phi_k.dim() != a.blocks()[k].n) fail(ErrorKind::dimension, "block channel does not match block size");
  std::vector<CMat> ops;
  for (const auto& kk : phi_k.kraus().ops()) ops.push_back(a.embed_commutant(k, kk));
  return Channel::from_kraus(KrausSet(a.dim(), std::move(ops)));
}

// -- the twirl map L -----------------------------------------------------------

/// L(Phi) = Phi + (D - 1) E_A + sum_{n_k > 1} (hat Phi_k - hat delta_k) / (n_k^2 - 1)
/// as a transfer matrix.
inline CMat L_closed_form(const Channel& phi, const AlgebraStructure& a, const Tolerances& tol = {}) {
  if (!fixes_algebra(phi, a, std::max(tol.eq, 1e-9))) fail(ErrorKind::precondition, "algebra is not fixed by the channel");
  const CMat te = condexp_channel(a).transfer();
  CMat out = phi.transfer() + static_cast<double>(a.D() - 1) * te;
  for (std::size_t k = 0; k < a.blocks().size(); ++k) {
    const Index n = a.blocks()[k].n;
    if (n == 1) continue;
    const CMat hat_phi = hat_embed(restrict_block(phi, a, k, tol), a, k).transfer();
    const CMat hat_delta = hat_embed(depolarizing(n), a, k).transfer();
    out += (hat_phi - hat_delta) / static_cast<double>(n * n - 1);
  }
  return out;
}

/// L(hat Phi_k) = n_k^2 E_A + n_k^2 / (n_k^2 - 1) (hat Phi_k - hat delta_k),
/// or E_A when n_k = 1.
inline CMat L_hat_closed_form(const Channel& phi, const AlgebraStructure& a, std::size_t k, const Tolerances& tol = {}) {
  check_block_index(a, k);
  if (!fixes_algebra(phi, a, std::max(tol.eq, 1e-9))) fail(ErrorKind::precondition, "algebra is not fixed by the channel");
  const CMat te = condexp_channel(a).transfer();
  const Index n = a.blocks()[k].n;
  if (n == 1) return te;
  const double n2 = static_cast<double>(n * n);
  const CMat hat_phi = hat_embed(restrict_block(phi, a, k, tol), a, k).transfer();
  const CMat hat_delta = hat_embed(depolarizing(n), a, k).transfer();
  return n2 * te + n2 / (n2 - 1.0) * (hat_phi - hat_delta);
}

/// Transfer matrix of X -> U X U^*.
inline CMat unitary_transfer(const CMat& u) { return kron(u, u.conjugate()); }

/// Sample mean of sum_i |<U, K_i>|^2 (U (x) conj U) over N Haar samples of
/// U(A'), an unbiased estimate of L as a transfer matrix.
inline CMat L_monte_carlo(const KrausSet& kraus, const AlgebraStructure& a, Index samples, Rng& rng) {
  if (samples < 1) fail(ErrorKind::domain, "sample count must be >= 1");
  if (kraus.dim() != a.dim()) fail(ErrorKind::dimension, "Kraus set does not match algebra");
  std::vector<std::vector<CMat>> comps;
  for (const auto& k : kraus.ops()) {
    if (!a.in_commutant(k, 1e-9)) fail(ErrorKind::precondition, "Kraus operator is not in the commutant");
    comps.push_back(a.commutant_components(k));
  }
  const Index d = a.dim();
  CMat acc = CMat::Zero(d * d, d * d);
  for (Index s = 0; s < samples; ++s) {
    std::vector<CMat> parts;
    for (const auto& b : a.blocks()) parts.push_back(haar_unitary(b.n, rng));
    double weight = 0.0;
    for (const auto& kc : comps) {
      cplx ip = 0.0;
      for (std::size_t b = 0; b < parts.size(); ++b) {
        ip += static_cast<double>(a.blocks()[b].n) * (parts[b].adjoint() * kc[b]).trace();
      }
      weight += std::norm(ip);
    }
    acc.noalias() += weight * unitary_transfer(a.commutant_element(parts));
  }
  return acc / static_cast<double>(samples);
}

// -- certification ------------------------------------------------------------

struct BallTest {
  bool inside = false;
  double min_eigenvalue = 0.0;
  MixingCertificate certificate;
  std::optional<Channel> witness;  // Psi with Phi = p Psi + (1 - p) E_A
};

/// Tests whether J(E_A) + (J(Phi) - J(E_A)) / p is positive semidefinite. If
/// so Phi = p Psi + (1 - p) E_A for the unital channel Psi with that Choi
/// matrix, so Phi is mixed unitary.
inline BallTest is_in_guaranteed_ball(const Channel& phi, const AlgebraStructure& a, const Tolerances& tol = {}) {
  if (!fixes_algebra(phi, a, std::max(tol.eq, 1e-9))) fail(ErrorKind::precondition, "algebra is not fixed by the channel");
  BallTest out;
  out.certificate = mixing_constant(a);
  const CMat je = condexp_channel(a).choi().mat;
  const double inv_p = static_cast<double>(out.certificate.denominator) / static_cast<double>(out.certificate.numerator);
  const CMat m = hermitize(je + inv_p * (phi.choi().mat - je));
  out.min_eigenvalue = min_eigenvalue(m);
  out.inside = out.min_eigenvalue >= -tol.psd * (1.0 + m.norm());
  if (out.inside) out.witness = Channel::from_choi({phi.dim(), m}, tol);
  return out;
}

struct ConstructOptions {
  double tol = 1e-6;
  std::size_t max_atoms = 200;
  std::size_t max_rounds = 3000;
  int random_starts = 4;
  int ascent_steps = 200;
  int atoms_per_round = 3;
};

namespace detail {

inline constexpr double kSumRowWeight = 1e3;

/// Coordinates of U in the orthonormal basis W (I_m (x) E_ab / sqrt(m)) W^*
/// of A', computed from block components: sqrt(m_k) vec(U_k).
inline CVec commutant_coords(const AlgebraStructure& a, const std::vector<CMat>& parts) {
  CVec c(a.D());
  Index p = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Block& b = a.blocks()[k];
    const double s = std::sqrt(static_cast<double>(b.m));
    for (Index i = 0; i < b.n; ++i)
      for (Index j = 0; j < b.n; ++j) c(p++) = s * parts[k](i, j);
  }
  return c;
}

inline std::vector<CMat> coords_to_parts(const AlgebraStructure& a, const CVec& c) {
  std::vector<CMat> parts;
  Index p = 0;
  for (const auto& b : a.blocks()) {
    CMat x(b.n, b.n);
    for (Index i = 0; i < b.n; ++i)
      for (Index j = 0; j < b.n; ++j) x(i, j) = c(p++);
    parts.push_back(std::move(x));
  }
  return parts;
}

inline std::vector<CMat> polar_parts(std::vector<CMat> parts) {
  for (auto& p : parts) p = polar_unitary(p);
  return parts;
}

/// Local maximization of c(U)^* R c(U) over U in U(A') by the
/// minorize-maximize step U <- polar((R + shift) c(U)), which never decreases
/// the objective when R + shift is positive semidefinite.
inline std::vector<CMat> ascend(const AlgebraStructure& a, const CMat& r, double shift, std::vector<CMat> parts,
                                int steps) {
  parts = polar_parts(std::move(parts));
  CVec c = commutant_coords(a, parts);
  double value = (c.adjoint() * r * c)(0).real();
  for (int s = 0; s < steps; ++s) {
    const CVec g = r * c + shift * c;
    auto next = polar_parts(coords_to_parts(a, g));
    const CVec cn = commutant_coords(a, next);
    const double vn = (cn.adjoint() * r * cn)(0).real();
    const bool small = vn - value <= 1e-13 * std::max(1.0, std::abs(value));
    if (vn >= value) {
      parts = std::move(next);
      c = cn;
      value = vn;
    }
    if (small) break;
  }
  return parts;
}

}  // namespace detail

/// Searches for weights w_i and unitaries U_i in U(A') with
/// sum_i w_i U_i X U_i^* equal to the target, by fully corrective
/// Frank-Wolfe in Choi coordinates restricted to A'. Seeds: the polar parts
/// of the target's Kraus operators and the finite realization of E_A.
/// Throws NoCertificateError when the residual target is not met.
inline MixedUnitaryDecomposition construct_mixed_unitary(const Channel& target, const AlgebraStructure& a,
                                                         const ConstructOptions& opt, Rng& rng) {
  if (target.dim() != a.dim()) fail(ErrorKind::dimension, "target and algebra dimensions differ");
  if (!target.is_unital_channel()) fail(ErrorKind::precondition, "target must be a unital channel");
  if (!(opt.tol > 0.0)) fail(ErrorKind::domain, "tolerance must be positive");
  std::vector<std::vector<CMat>> kraus_parts;
  for (const auto& k : target.kraus().ops()) {
    if (!a.in_commutant(k, 1e-8)) fail(ErrorKind::precondition, "target Kraus operator is not in the commutant");
    kraus_parts.push_back(a.commutant_components(k));
  }

  const Index dim_c = a.D();
  CMat target_c = CMat::Zero(dim_c, dim_c);
  for (const auto& parts : kraus_parts) {
    const CVec c = detail::commutant_coords(a, parts);
    target_c.noalias() += c * c.adjoint();
  }
  // The last row pins the weight sum to one far more tightly than the
  // residual target would on its own.
  const Index n_real = dim_c * dim_c;
  RVec b(n_real + 1);
  b << hermitian_to_real(target_c), detail::kSumRowWeight;
  auto column = [&](const CVec& c) {
    RVec col(n_real + 1);
    col << outer_to_real(c), detail::kSumRowWeight;
    return col;
  };

  using Parts = std::vector<CMat>;
  AtomDictionary<Parts> seeds{n_real + 1, {}, {}};
  auto add_seed = [&](Parts parts) {
    const CVec c = detail::commutant_coords(a, parts);
    seeds.add(column(c), std::move(parts));
  };
  for (const auto& parts : kraus_parts) {
    bool nonzero = false;
    for (const auto& p : parts) nonzero = nonzero || p.norm() > 1e-12;
    if (nonzero) add_seed(detail::polar_parts(parts));
  }
  for (const auto& u : condexp_as_mixed_unitary(a).unitaries) add_seed(a.commutant_components(u));

  auto generate = [&](const RVec& residual, const AtomDictionary<Parts>&) {
    const CMat r = real_to_hermitian(residual.head(n_real), dim_c);
    Eigen::SelfAdjointEigenSolver<CMat> es(r);
    const double shift = std::max(0.0, -es.eigenvalues()(0));
    std::vector<Parts> starts;
    const int top = std::min<int>(3, static_cast<int>(dim_c));
    for (int i = 0; i < top; ++i) {
      starts.push_back(detail::coords_to_parts(a, es.eigenvectors().col(dim_c - 1 - i)));
    }
    for (int i = 0; i < opt.random_starts; ++i) {
      Parts p;
      for (const auto& blk : a.blocks()) p.push_back(haar_unitary(blk.n, rng));
      starts.push_back(std::move(p));
    }
    std::vector<std::pair<double, Parts>> found;
    for (auto& s : starts) {
      Parts u = detail::ascend(a, r, shift, std::move(s), opt.ascent_steps);
      const CVec c = detail::commutant_coords(a, u);
      const double gain = (c.adjoint() * r * c)(0).real();
      if (gain <= 1e-15 * std::max(1.0, r.norm())) continue;
      bool duplicate = false;
      for (const auto& [g, v] : found) {
        const CVec cv = detail::commutant_coords(a, v);
        if (std::abs(std::abs(cv.dot(c)) - static_cast<double>(a.dim())) < 1e-9) duplicate = true;
      }
      if (!duplicate) found.emplace_back(gain, std::move(u));
    }
    std::stable_sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    std::vector<std::pair<RVec, Parts>> out;
    for (auto& [g, u] : found) {
      if (static_cast<int>(out.size()) >= opt.atoms_per_round) break;
      out.emplace_back(column(detail::commutant_coords(a, u)), std::move(u));
    }
    return out;
  };

  FrankWolfeOptions fw;
  fw.tol = opt.tol;
  fw.max_atoms = opt.max_atoms;
  fw.max_rounds = opt.max_rounds;
  fw.throw_on_stagnation = false;
  auto res = frank_wolfe_fit(b, std::move(seeds), generate, fw);

  std::vector<double> weights;
  std::vector<CMat> unitaries;
  for (std::size_t j = 0; j < res.atoms.size(); ++j) {
    weights.push_back(res.fit.weights(static_cast<Index>(j)));
    unitaries.push_back(a.commutant_element(res.atoms.payloads[j]));
  }
  auto dec = make_decomposition(std::move(weights), std::move(unitaries), target.choi());
  if (res.status != FitStatus::converged || dec.residual > opt.tol) {
    throw NoCertificateError("no decomposition within tolerance (" + std::string(to_string(res.status)) + ")",
                             dec.residual);
  }
  if (std::abs(dec.weight_sum() - 1.0) > 1e-8) {
    fail(ErrorKind::numerical, "weights sum to " + std::to_string(dec.weight_sum()));
  }
  return dec;
}

inline MixedUnitaryDecomposition construct_mixed_unitary(const Channel& target, const AlgebraStructure& a, Rng& rng) {
  return construct_mixed_unitary(target, a, ConstructOptions{}, rng);
}

}  // namespace muwork
