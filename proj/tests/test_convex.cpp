#include "test_util.hpp"

namespace muwork {
namespace {

RMat random_psd_columns(Index dim, Index count, Rng& rng) {
  RMat a(dim * dim, count);
  for (Index j = 0; j < count; ++j) {
    const CMat g = ginibre(dim, dim, rng);
    a.col(j) = hermitian_to_real(g * g.adjoint());
  }
  return a;
}

double kkt(const RMat& a, const RVec& b, const RVec& x) {
  const RVec g = a.transpose() * (a * x - b);
  double v = 0.0;
  for (Index j = 0; j < x.size(); ++j) v = std::max(v, x(j) > 0.0 ? std::abs(g(j)) : std::max(0.0, -g(j)));
  return v;
}

TEST(Embedding, PreservesInnerProducts) {
  Rng rng(101);
  for (int t = 0; t < 5; ++t) {
    const CMat x = random_hermitian(4, rng), y = random_hermitian(4, rng);
    EXPECT_NEAR(hermitian_to_real(x).dot(hermitian_to_real(y)), trace_inner(x, y).real(), 1e-12);
    EXPECT_LT((real_to_hermitian(hermitian_to_real(x), 4) - x).norm(), 1e-14);
    const CVec v = ginibre(4, 1, rng);
    EXPECT_LT((outer_to_real(v) - hermitian_to_real(v * v.adjoint())).norm(), 1e-12);
  }
}

TEST(Nnls, ColumnTarget) {
  Rng rng(102);
  const RMat a = random_psd_columns(3, 12, rng);
  const auto fit = nnls(a, a.col(5));
  EXPECT_NEAR(fit.weights(5), 1.0, 1e-10);
  EXPECT_NEAR(fit.weights.sum(), 1.0, 1e-10);
  EXPECT_LT(fit.residual, 1e-10);
}

TEST(Nnls, NegatedColumnGivesZero) {
  Rng rng(103);
  const RMat a = random_psd_columns(3, 12, rng);
  const RVec b = -a.col(2);
  const auto fit = nnls(a, b);
  EXPECT_EQ(fit.weights.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(fit.residual, b.norm(), 1e-12);
}

TEST(Nnls, PlantedConvexCombination) {
  Rng rng(104);
  const RMat a = random_psd_columns(4, 50, rng);
  RVec w = RVec::Zero(50);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Index j = 0; j < 50; j += 5) w(j) = u(rng);
  w /= w.sum();
  const auto fit = nnls(a, a * w);
  EXPECT_LE(fit.residual, 1e-10);
  EXPECT_TRUE(fit.converged);
}

TEST(Nnls, KktAndResidualOnRandomProblems) {
  Rng rng(105);
  for (int t = 0; t < 20; ++t) {
    const RMat a = gaussian_real(30, 15 + t, rng);
    const RVec b = gaussian_real(30, 1, rng);
    const auto fit = nnls(a, b);
    EXPECT_GE(fit.weights.minCoeff(), 0.0);
    EXPECT_NEAR(fit.residual, (a * fit.weights - b).norm(), 1e-12);
    EXPECT_LE(kkt(a, b, fit.weights), 1e-8);
    EXPECT_TRUE(fit.converged);
  }
}

TEST(Nnls, Errors) {
  RMat a = RMat::Ones(3, 2);
  EXPECT_ERROR_KIND(nnls(a, RVec::Ones(4)), ErrorKind::dimension);
  a(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_ERROR_KIND(nnls(a, RVec::Ones(3)), ErrorKind::domain);
}

TEST(Nnls, EqualTraceColumnsGiveUnitWeightSum) {
  // Columns and target all embed trace-3 Hermitian matrices.
  Rng rng(106);
  const Index d = 3;
  RMat a(d * d, 40);
  for (Index j = 0; j < 40; ++j) {
    const CVec v = haar_unitary(d, rng).col(0) * std::sqrt(static_cast<double>(d));
    a.col(j) = outer_to_real(v);
  }
  RVec w = RVec::Zero(40);
  for (Index j = 0; j < 40; j += 3) w(j) = 1.0;
  w /= w.sum();
  const auto fit = nnls(a, a * w);
  ASSERT_LE(fit.residual, 1e-8);
  EXPECT_NEAR(fit.weights.sum(), 1.0, 1e-6);
}

TEST(FrankWolfe, TargetInInitialDictionary) {
  Rng rng(107);
  const RMat a = random_psd_columns(3, 6, rng);
  AtomDictionary<int> dict{a.rows(), {}, {}};
  for (Index j = 0; j < a.cols(); ++j) dict.add(a.col(j), static_cast<int>(j));
  auto never = [](const RVec&, const AtomDictionary<int>&) { return std::vector<std::pair<RVec, int>>{}; };
  const auto res = frank_wolfe_fit(RVec(0.3 * a.col(1) + 0.7 * a.col(4)), dict, never);
  EXPECT_EQ(res.status, FitStatus::converged);
  EXPECT_EQ(res.history.size(), 1u);
  EXPECT_EQ(res.atoms.size(), 2u);
}

TEST(FrankWolfe, DepolarizingFromWeylHeisenberg) {
  const Index d = 3;
  const RVec target = hermitian_to_real(depolarizing(d).choi().mat);
  const auto wh = weyl_heisenberg(d);
  AtomDictionary<CMat> empty{d * d * d * d, {}, {}};
  // Hands out the Weyl-Heisenberg unitary best aligned with the residual.
  auto generate = [&](const RVec& r, const AtomDictionary<CMat>&) {
    std::vector<std::pair<RVec, CMat>> out;
    double best = 0.0;
    for (const auto& u : wh) {
      const RVec col = outer_to_real(vec(u));
      if (col.dot(r) > best + 1e-12) {
        best = col.dot(r);
        out = {{col, u}};
      }
    }
    return out;
  };
  FrankWolfeOptions opt;
  opt.tol = 1e-12;
  const auto res = frank_wolfe_fit(target, empty, generate, opt);
  EXPECT_EQ(res.status, FitStatus::converged);
  EXPECT_LE(res.fit.residual, 1e-12);
  EXPECT_LE(res.atoms.size(), 9u);
  for (std::size_t i = 1; i < res.history.size(); ++i) EXPECT_LE(res.history[i], res.history[i - 1] + 1e-12);
}

TEST(FrankWolfe, MonotoneOnRandomRuns) {
  Rng rng(108);
  for (int t = 0; t < 3; ++t) {
    const RMat pool = random_psd_columns(3, 60, rng);
    RVec w = RVec::Zero(60);
    for (Index j = 0; j < 60; j += 7) w(j) = 1.0;
    const RVec target = pool * (w / w.sum());
    AtomDictionary<Index> dict{pool.rows(), {}, {}};
    dict.add(pool.col(0), 0);
    auto generate = [&](const RVec& r, const AtomDictionary<Index>&) {
      Index best = 0;
      (pool.transpose() * r).maxCoeff(&best);
      return std::vector<std::pair<RVec, Index>>{{pool.col(best), best}};
    };
    FrankWolfeOptions opt;
    opt.tol = 1e-9;
    opt.throw_on_stagnation = false;
    const auto res = frank_wolfe_fit(target, dict, generate, opt);
    for (std::size_t i = 1; i < res.history.size(); ++i) EXPECT_LE(res.history[i], res.history[i - 1] + 1e-12);
  }
}

TEST(FrankWolfe, StagnationError) {
  Rng rng(109);
  const RMat a = random_psd_columns(3, 2, rng);
  AtomDictionary<int> dict{a.rows(), {}, {}};
  dict.add(a.col(0), 0);
  // Keeps offering the same useless atom.
  auto same = [&](const RVec&, const AtomDictionary<int>&) {
    return std::vector<std::pair<RVec, int>>{{a.col(0), 0}};
  };
  const RVec target = -a.col(1);
  EXPECT_ERROR_KIND(frank_wolfe_fit(target, dict, same), ErrorKind::stagnation);
  FrankWolfeOptions opt;
  opt.throw_on_stagnation = false;
  const auto res = frank_wolfe_fit(target, dict, same, opt);
  EXPECT_EQ(res.status, FitStatus::stagnated);
}

TEST(FrankWolfe, Deterministic) {
  auto run = [] {
    Rng rng(110);
    const RMat pool = random_psd_columns(3, 40, rng);
    const RVec target = pool.rowwise().sum() / 40.0;
    AtomDictionary<Index> dict{pool.rows(), {}, {}};
    auto generate = [&](const RVec& r, const AtomDictionary<Index>&) {
      Index best = 0;
      (pool.transpose() * r).maxCoeff(&best);
      return std::vector<std::pair<RVec, Index>>{{pool.col(best), best}};
    };
    FrankWolfeOptions opt;
    opt.throw_on_stagnation = false;
    return frank_wolfe_fit(target, dict, generate, opt).fit.weights;
  };
  const RVec a = run(), b = run();
  ASSERT_EQ(a.size(), b.size());
  for (Index i = 0; i < a.size(); ++i) EXPECT_EQ(a(i), b(i));
}

}  // namespace
}  // namespace muwork
