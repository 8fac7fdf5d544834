#include "test_util.hpp"

namespace muwork {
namespace {

using testing::dist;

TEST(Vec, MatrixUnitIsBasisVector) {
  CVec expected = CVec::Zero(4);
  expected(1) = 1.0;
  EXPECT_EQ(vec(matrix_unit(2, 0, 1)), expected);
  CVec id(4);
  id << 1.0, 0.0, 0.0, 1.0;
  EXPECT_EQ(vec(CMat::Identity(2, 2)), id);
}

TEST(Vec, UnvecInverts) {
  Rng rng(1);
  const CMat x = ginibre(3, 3, rng);
  EXPECT_EQ(unvec(vec(x), 3), x);
}

TEST(Vec, NonSquareIsDimensionError) {
  EXPECT_ERROR_KIND(vec(CMat::Zero(2, 3)), ErrorKind::dimension);
}

TEST(KrausSet, DimensionFromFirstOperator) {
  Rng rng(3);
  const KrausSet k(std::vector<CMat>{ginibre(3, 3, rng), ginibre(3, 3, rng)});
  EXPECT_EQ(k.dim(), 3);
  EXPECT_EQ(k.size(), 2);
  EXPECT_EQ(Channel::from_kraus(std::vector<CMat>{CMat::Identity(4, 4)}).dim(), 4);
  EXPECT_ERROR_KIND(KrausSet(std::vector<CMat>{}), ErrorKind::dimension);
  EXPECT_ERROR_KIND(KrausSet(std::vector<CMat>{CMat::Identity(2, 2), CMat::Identity(3, 3)}), ErrorKind::dimension);
}

TEST(Choi, IdentityChannelIsRankOne) {
  const Channel id = identity_channel(3);
  const CVec v = vec(CMat::Identity(3, 3));
  EXPECT_LT(dist(id.choi().mat, v * v.adjoint()), 1e-14);
  EXPECT_NEAR(id.choi().mat.trace().real(), 3.0, 1e-14);
  EXPECT_EQ(id.kraus().size(), 1);
}

TEST(Choi, DepolarizingIsScaledIdentity) {
  for (Index d = 2; d <= 4; ++d) {
    EXPECT_LT(dist(depolarizing(d).choi().mat, CMat::Identity(d * d, d * d) / double(d)), 1e-14);
  }
}

TEST(Choi, WernerHolevoIsAntisymmetricProjector) {
  const CMat expected = 0.5 * (CMat::Identity(9, 9) - testing::swap_operator(3));
  EXPECT_LT(dist(werner_holevo3().choi().mat, expected), 1e-14);
}

TEST(Choi, AgreesWithDefinitionUpToFactorSwap) {
  Rng rng(2);
  const Channel phi = random_unital_channel(3, 4, rng);
  const CMat s = testing::swap_operator(3);
  EXPECT_LT(dist(s * phi.choi().mat * s, testing::choi_by_definition(phi)), 1e-12);
}

TEST(KrausOfChoi, RankOneGivesUnitary) {
  const CVec v = vec(CMat::Identity(3, 3));
  const KrausSet k = kraus_of_choi({3, v * v.adjoint()});
  ASSERT_EQ(k.size(), 1);
  const CMat& op = k[0];
  const cplx phase = op(0, 0) / std::abs(op(0, 0));
  EXPECT_LT(dist(op / phase, CMat::Identity(3, 3)), 1e-12);
}

TEST(KrausOfChoi, MaximallyMixedGivesDepolarizing) {
  const KrausSet k = kraus_of_choi({2, CMat::Identity(4, 4) / 2.0});
  EXPECT_EQ(k.size(), 4);
  EXPECT_TRUE(same_map(Channel::from_kraus(k), depolarizing(2), 1e-12));
}

TEST(KrausOfChoi, NegativeEigenvalueIsRejected) {
  CMat j = CMat::Identity(4, 4);
  j(3, 3) = -1e-3;
  EXPECT_ERROR_KIND(kraus_of_choi({2, j}), ErrorKind::not_completely_positive);
}

TEST(KrausOfChoi, RoundTripOnRandomPsd) {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    const CMat g = ginibre(9, 9, rng);
    CMat j = g * g.adjoint();
    j *= 3.0 / j.trace().real();
    EXPECT_LT(dist(choi_of(kraus_of_choi({3, j})).mat, j), 1e-10);
  }
}

TEST(Apply, NamedChannels) {
  Rng rng(4);
  const CMat x = ginibre(3, 3, rng);
  EXPECT_LT(dist(depolarizing(3).apply(x), x.trace() / 3.0 * CMat::Identity(3, 3)), 1e-14);
  EXPECT_LT(dist(identity_channel(3).apply(x), x), 1e-14);
  const CMat e11 = matrix_unit(3, 0, 0);
  EXPECT_LT(dist(werner_holevo3().apply(e11), 0.5 * (CMat::Identity(3, 3) - e11)), 1e-14);
  EXPECT_LT(dist(werner_holevo3().apply(x), 0.5 * (x.trace() * CMat::Identity(3, 3) - x.transpose())), 1e-14);
  EXPECT_LT(depolarizing(3).apply(matrix_unit(3, 0, 1)).norm(), 1e-15);
  EXPECT_LT(dist(werner_holevo3().apply(CMat::Identity(3, 3)), CMat::Identity(3, 3)), 1e-14);
  CMat y(2, 2);
  y << 1.0, 2.0, 3.0, 4.0;
  CMat diag = CMat::Zero(2, 2);
  diag(0, 0) = 1.0;
  diag(1, 1) = 4.0;
  EXPECT_LT(dist(map_to_diagonal(2).apply(y), diag), 1e-15);
}

TEST(Apply, DimensionMismatch) {
  EXPECT_ERROR_KIND(depolarizing(3).apply(CMat::Zero(2, 2)), ErrorKind::dimension);
}

TEST(Apply, ThreeRepresentationsAgree) {
  Rng rng(5);
  const std::vector<Channel> channels{random_unital_channel(3, 2, rng), werner_holevo3(), depolarizing(2),
                                      map_to_diagonal(4), Channel::from_kraus({ginibre(3, 3, rng), ginibre(3, 3, rng)})};
  for (const auto& phi : channels) {
    const Index d = phi.dim();
    EXPECT_LT(dist(phi.transfer(), testing::transfer_by_definition(phi)), 1e-12);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        const CMat e = matrix_unit(d, i, j);
        EXPECT_LT(dist(phi.apply(e), phi.apply_via_choi(e)), 1e-10);
        EXPECT_LT(dist(phi.apply(e), phi.apply_via_transfer(e)), 1e-10);
      }
  }
}

TEST(Flags, NamedChannelsAreUnitalChannels) {
  for (const auto& phi : {depolarizing(3), werner_holevo3(), map_to_diagonal(3), identity_channel(2)}) {
    EXPECT_TRUE(phi.is_unital());
    EXPECT_TRUE(phi.is_trace_preserving());
  }
  Rng rng(6);
  const Channel cp = Channel::from_kraus({ginibre(3, 3, rng)});
  EXPECT_FALSE(cp.is_unital_channel());
}

TEST(Dual, Properties) {
  Rng rng(7);
  const CMat u = haar_unitary(3, rng);
  EXPECT_TRUE(same_map(dual(unitary_channel(u)), unitary_channel(u.adjoint()), 1e-12));
  EXPECT_TRUE(same_map(dual(depolarizing(3)), depolarizing(3), 1e-12));
  const Channel phi = random_unital_channel(3, 3, rng);
  EXPECT_TRUE(dual(phi).is_unital_channel());
  EXPECT_LT(dist(dual(dual(phi)).transfer(), phi.transfer()), 1e-12);
  const Channel psi = Channel::from_kraus({ginibre(3, 3, rng), ginibre(3, 3, rng)});
  for (int t = 0; t < 5; ++t) {
    const CMat x = ginibre(3, 3, rng), y = ginibre(3, 3, rng);
    EXPECT_LT(std::abs(trace_inner(psi.apply(x), y) - trace_inner(x, dual(psi).apply(y))), 1e-10);
  }
}

TEST(Compose, WernerHolevoSquared) {
  const Channel w2 = power(werner_holevo3(), 2);
  const CMat expected = 0.25 * identity_channel(3).transfer() + 0.75 * depolarizing(3).transfer();
  EXPECT_LT(dist(w2.transfer(), expected), 1e-12);
  EXPECT_LT(dist(compose(werner_holevo3(), werner_holevo3()).transfer(), expected), 1e-12);
}

TEST(Compose, DepolarizingAbsorbs) {
  Rng rng(8);
  const Channel phi = random_unital_channel(3, 3, rng);
  EXPECT_TRUE(same_map(compose(phi, depolarizing(3)), depolarizing(3), 1e-12));
  EXPECT_TRUE(same_map(compose(depolarizing(3), phi), depolarizing(3), 1e-12));
}

TEST(Compose, KrausCountStaysBounded) {
  Rng rng(9);
  const Channel phi = random_unital_channel(2, 4, rng);
  const Channel c = compose(phi, phi);
  EXPECT_LE(c.kraus().size(), 4);
  EXPECT_LT(dist(c.transfer(), phi.transfer() * phi.transfer()), 1e-12);
}

TEST(ConvexCombine, SingleTermAndBadWeights) {
  const Channel w = werner_holevo3();
  EXPECT_TRUE(same_map(convex_combine({{1.0, w}}), w, 1e-12));
  EXPECT_ERROR_KIND(convex_combine({{0.5, w}, {0.4, depolarizing(3)}}), ErrorKind::invalid_mixture);
  EXPECT_ERROR_KIND(convex_combine({{1.2, w}, {-0.2, depolarizing(3)}}), ErrorKind::invalid_mixture);
  const Channel mix = convex_combine({{0.3, w}, {0.7, identity_channel(3)}});
  EXPECT_LT(dist(mix.transfer(), 0.3 * w.transfer() + 0.7 * identity_channel(3).transfer()), 1e-12);
}

TEST(Power, MatchesTransferPowers) {
  Rng rng(10);
  const Channel phi = random_unital_channel(3, 2, rng);
  CMat t = CMat::Identity(9, 9);
  for (int k = 1; k <= 16; ++k) {
    t = t * phi.transfer();
    EXPECT_LT(dist(power(phi, k).transfer(), t), 1e-10) << "k = " << k;
  }
  EXPECT_ERROR_KIND(power(phi, 0), ErrorKind::precondition);
}

TEST(Transfer, UnitalSpectrumProperties) {
  Rng rng(11);
  for (int t = 0; t < 5; ++t) {
    const Channel phi = random_unital_channel(3, 3, rng);
    const CVec vi = vec(CMat::Identity(3, 3));
    EXPECT_LT((phi.transfer() * vi - vi).norm(), 1e-12);
    for (const cplx& l : transfer_eigenvalues(phi)) EXPECT_LE(std::abs(l), 1.0 + 1e-9);
  }
}

TEST(WeylHeisenberg, QubitIsPauliUpToPhase) {
  const auto w = weyl_heisenberg(2);
  ASSERT_EQ(w.size(), 4u);
  CMat x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  const std::vector<CMat> expected{CMat::Identity(2, 2), z, x, x * z};
  for (std::size_t i = 0; i < 4; ++i) {
    const cplx overlap = trace_inner(w[i], expected[i]) / 2.0;
    EXPECT_NEAR(std::abs(overlap), 1.0, 1e-14);
  }
}

TEST(WeylHeisenberg, OrthogonalAndTwirlsToDepolarizing) {
  for (Index d = 2; d <= 5; ++d) {
    const auto w = weyl_heisenberg(d);
    for (std::size_t a = 0; a < w.size(); ++a) {
      EXPECT_TRUE(is_unitary(w[a], 1e-12));
      for (std::size_t b = 0; b < w.size(); ++b) {
        const cplx ip = (w[a].adjoint() * w[b]).trace();
        EXPECT_LT(std::abs(ip - (a == b ? double(d) : 0.0)), 1e-12);
      }
    }
    const CMat j = mixed_unitary_choi(std::vector<double>(w.size(), 1.0 / double(d * d)), w);
    EXPECT_LT(dist(j, depolarizing(d).choi().mat), 1e-12);
  }
}

}  // namespace
}  // namespace muwork
