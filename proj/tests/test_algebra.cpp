#include <algorithm>

#include "test_util.hpp"

namespace muwork {
namespace {

using testing::dist;

std::vector<Block> sorted_blocks(std::vector<Block> b) {
  std::sort(b.begin(), b.end(), [](Block x, Block y) { return std::pair(x.m, x.n) < std::pair(y.m, y.n); });
  return b;
}

std::vector<CMat> all_units(Index d) {
  std::vector<CMat> out;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) out.push_back(matrix_unit(d, i, j));
  return out;
}

// Invariants every structure must satisfy.
void check_structure(const AlgebraStructure& a) {
  Index total = 0;
  for (const auto& b : a.blocks()) total += b.size();
  EXPECT_EQ(total, a.dim());
  const auto& basis = a.basis();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      EXPECT_LT(std::abs(trace_inner(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)), 1e-10);
    }
    // Closed under products and adjoints: stays in the span.
    EXPECT_LT(distance_to_span(basis[i].adjoint(), basis), 1e-9);
    for (std::size_t j = 0; j < basis.size(); ++j) EXPECT_LT(distance_to_span(basis[i] * basis[j], basis), 1e-9);
  }
  EXPECT_EQ(static_cast<Index>(commutant(basis, a.dim()).basis.size()), a.D());
  // W* A W has the declared block pattern.
  const CMat& w = a.unitary();
  EXPECT_TRUE(is_unitary(w, 1e-10));
  for (const auto& b : basis) {
    const CMat s = w.adjoint() * b * w;
    Index off = 0;
    for (const auto& blk : a.blocks()) {
      const Index sz = blk.size();
      const double inside = s.block(off, off, sz, sz).norm();
      const double row = s.block(off, 0, sz, s.cols()).norm();
      EXPECT_LT(std::abs(row - inside), 1e-9);
      off += sz;
    }
  }
}

void check_condexp(const AlgebraStructure& a, Rng& rng) {
  const Index d = a.dim();
  for (int t = 0; t < 3; ++t) {
    const CMat x = ginibre(d, d, rng), y = ginibre(d, d, rng);
    const CMat ex = a.conditional_expectation(x);
    EXPECT_LT(dist(a.conditional_expectation(ex), ex), 1e-10);
    EXPECT_LT(std::abs(ex.trace() - x.trace()), 1e-10);
    EXPECT_LT(std::abs(trace_inner(ex, y) - trace_inner(x, a.conditional_expectation(y))), 1e-10);
    const CMat psd = x * x.adjoint();
    EXPECT_GE(min_eigenvalue(a.conditional_expectation(psd)), -1e-10);
  }
  EXPECT_LT(dist(a.conditional_expectation(CMat::Identity(d, d)), CMat::Identity(d, d)), 1e-10);
}

TEST(Commutant, Identity) { EXPECT_EQ(commutant({CMat::Identity(3, 3)}, 3).basis.size(), 9u); }

TEST(Commutant, FullMatrixAlgebra) {
  const auto c = commutant(all_units(3), 3);
  ASSERT_EQ(c.basis.size(), 1u);
  EXPECT_LT(dist(c.basis[0] / c.basis[0](0, 0), CMat::Identity(3, 3)), 1e-10);
}

TEST(Commutant, DepolarizingKraus) {
  EXPECT_EQ(commutant(depolarizing(3).kraus().ops(), 3).basis.size(), 1u);
}

TEST(Commutant, EmptyGeneratorsGiveEverything) { EXPECT_EQ(commutant({}, 2).basis.size(), 4u); }

TEST(FixedPointAlgebra, NamedChannels) {
  const auto full = fixed_point_algebra(identity_channel(3));
  EXPECT_EQ(full.blocks(), (std::vector<Block>{{3, 1}}));
  EXPECT_EQ(full.blocks(Convention::reduction), (std::vector<Block>{{1, 3}}));
  const auto w = fixed_point_algebra(werner_holevo3());
  EXPECT_EQ(w.blocks(), (std::vector<Block>{{1, 3}}));
  EXPECT_EQ(w.D(), 9);
  EXPECT_EQ(w.algebra_dim(), 1);
}

TEST(FixedPointAlgebra, SchurChannelGivesDiagonal) {
  CMat c(3, 3);
  c << 1.0, 0.3, 0.1, 0.3, 1.0, cplx(0.2, 0.1), 0.1, cplx(0.2, -0.1), 1.0;
  const auto a = fixed_point_algebra(schur_channel(CorrelationMatrix(c)));
  EXPECT_EQ(a.blocks(), (std::vector<Block>{{1, 1}, {1, 1}, {1, 1}}));
}

TEST(FixedPointAlgebra, BasisIsFixedAndStructureValid) {
  Rng rng(21);
  const auto target = AlgebraStructure::from_blocks({{1, 2}, {1, 3}});
  const Channel phi = random_channel_fixing(target, 3, rng);
  const auto a = fixed_point_algebra(phi, rng);
  EXPECT_EQ(a.blocks(), target.blocks());
  for (const auto& b : a.basis()) EXPECT_LT(dist(phi.apply(b), b), 1e-9);
  check_structure(a);
}

TEST(FixedPointAlgebra, NonUnitalIsPrecondition) {
  Rng rng(22);
  EXPECT_ERROR_KIND(fixed_point_algebra(Channel::from_kraus({ginibre(2, 2, rng)})), ErrorKind::precondition);
}

TEST(DecomposeAlgebra, Diagonal) {
  std::vector<CMat> basis;
  for (Index i = 0; i < 3; ++i) basis.push_back(matrix_unit(3, i, i));
  const auto a = decompose_algebra(basis);
  EXPECT_EQ(a.blocks(), (std::vector<Block>{{1, 1}, {1, 1}, {1, 1}}));
  check_structure(a);
}

TEST(DecomposeAlgebra, SwapAlgebraSplitsSymmetricAndAntisymmetric) {
  const auto a = decompose_algebra({CMat::Identity(4, 4), testing::swap_operator(2)});
  // Multiplicity 3 on the symmetric subspace, 1 on the antisymmetric one.
  EXPECT_EQ(a.blocks(), (std::vector<Block>{{1, 3}, {1, 1}}));
  check_structure(a);
}

TEST(DecomposeAlgebra, InvariantUnderConjugation) {
  Rng rng(23);
  // Delta_2 (+) M_2 in standard position on C^4.
  std::vector<CMat> basis{matrix_unit(4, 0, 0), matrix_unit(4, 1, 1)};
  for (Index i = 2; i < 4; ++i)
    for (Index j = 2; j < 4; ++j) basis.push_back(matrix_unit(4, i, j));
  for (int t = 0; t < 5; ++t) {
    const CMat v = haar_unitary(4, rng);
    std::vector<CMat> rotated;
    for (const auto& b : basis) rotated.push_back(v * b * v.adjoint());
    const auto a = decompose_algebra(rotated, rng);
    EXPECT_EQ(sorted_blocks(a.blocks()), sorted_blocks({{2, 1}, {1, 1}, {1, 1}}));
    check_structure(a);
    check_condexp(a, rng);
  }
}

TEST(DecomposeAlgebra, TensorBlock) {
  Rng rng(24);
  // M_2 (x) I_2 conjugated by a random unitary.
  const CMat v = haar_unitary(4, rng);
  std::vector<CMat> basis;
  for (const auto& e : all_units(2)) basis.push_back(v * kron(e, CMat::Identity(2, 2)) * v.adjoint());
  const auto a = decompose_algebra(basis, rng);
  EXPECT_EQ(a.blocks(), (std::vector<Block>{{2, 2}}));
  check_structure(a);
}

TEST(DecomposeAlgebra, NotAnAlgebra) {
  EXPECT_ERROR_KIND(decompose_algebra({CMat::Identity(2, 2), matrix_unit(2, 0, 1)}), ErrorKind::not_an_algebra);
}

TEST(ConditionalExpectation, ScalarsAndDiagonal) {
  Rng rng(25);
  const CMat x = ginibre(3, 3, rng);
  EXPECT_LT(dist(AlgebraStructure::scalars(3).conditional_expectation(x), depolarizing(3).apply(x)), 1e-12);
  EXPECT_LT(dist(AlgebraStructure::diagonal(3).conditional_expectation(x), map_to_diagonal(3).apply(x)), 1e-12);
  const auto a = AlgebraStructure::from_blocks({{2, 1}, {1, 2}});
  // Sorted by (n, m): block 0 is (1, 2), block 1 is (2, 1).
  const CMat in_a = a.embed_algebra(0, ginibre(1, 1, rng)) + a.embed_algebra(1, ginibre(2, 2, rng));
  EXPECT_ERROR_KIND(a.embed_algebra(0, ginibre(2, 2, rng)), ErrorKind::dimension);
  EXPECT_LT(dist(a.conditional_expectation(in_a), in_a), 1e-12);
  check_condexp(a, rng);
}

TEST(ConditionalExpectation, HaarAverageOverCommutant) {
  Rng rng(26);
  const auto a = AlgebraStructure::from_blocks({{1, 2}, {2, 1}, {1, 2}});
  const CMat x = ginibre(6, 6, rng);
  double prev = 0.0;
  for (Index n : {2000, 20000}) {
    CMat acc = CMat::Zero(6, 6);
    for (Index s = 0; s < n; ++s) {
      const CMat u = haar_commutant_unitary(a, rng);
      acc += u * x * u.adjoint();
    }
    const double err = dist(acc / double(n), a.conditional_expectation(x));
    if (n == 20000) {
      EXPECT_LT(err, 5e-2);
      EXPECT_LT(err, prev);
    }
    prev = err;
  }
}

TEST(WeightedInnerProduct, Examples) {
  const auto s = AlgebraStructure::scalars(3);
  EXPECT_NEAR(weighted_inner_product(s, CMat::Identity(3, 3), CMat::Identity(3, 3)).real(), 9.0, 1e-12);
  const auto a = AlgebraStructure::from_blocks({{1, 2}, {2, 1}, {1, 3}});
  EXPECT_NEAR(weighted_inner_product(a, CMat::Identity(7, 7), CMat::Identity(7, 7)).real(), double(a.D()), 1e-12);
  const auto w = weyl_heisenberg(3);
  // Blocks are stored (n, m) descending: n = 3, 2, 1.
  ASSERT_EQ(a.blocks()[0].n, 3);
  ASSERT_EQ(a.blocks()[1].n, 2);
  const CMat u = a.commutant_element({w[1], CMat::Identity(2, 2), CMat::Identity(1, 1)});
  const CMat v = a.commutant_element({w[4], CMat::Identity(2, 2), CMat::Identity(1, 1)});
  // 3 * 0 from the orthogonal clock-and-shift pair, then 2 * Tr(I_2) + 1 * 1.
  EXPECT_LT(std::abs(weighted_inner_product(a, u, v) - 5.0), 1e-12);
  EXPECT_ERROR_KIND(weighted_inner_product(a, matrix_unit(7, 0, 6), CMat::Identity(7, 7)), ErrorKind::domain);
}

TEST(ReduceChannel, TensorExample) {
  Rng rng(27);
  const Channel psi0 = random_unital_channel(2, 3, rng);
  std::vector<CMat> ops;
  for (const auto& k : psi0.kraus().ops()) ops.push_back(kron(k, CMat::Identity(2, 2)));
  const Channel phi = Channel::from_kraus(std::move(ops));
  // Fix(phi) contains I_2 (x) M_2 = SWAP (M_2 (x) I_2) SWAP.
  const auto a = AlgebraStructure::from_standard_form({{2, 2}}, testing::swap_operator(2));
  EXPECT_TRUE(fixes_algebra(phi, a, 1e-10));
  EXPECT_TRUE(same_map(reduce_channel(phi, a), psi0, 1e-10));
}

TEST(ReduceChannel, MultiplicativeAndUnitaryPreserving) {
  Rng rng(28);
  const auto a = AlgebraStructure::from_blocks({{2, 2}, {1, 1}});
  const Channel phi = random_channel_fixing(a, 3, rng), psi = random_channel_fixing(a, 2, rng);
  EXPECT_TRUE(same_map(reduce_channel(compose(phi, psi), a), compose(reduce_channel(phi, a), reduce_channel(psi, a)),
                       1e-10));
  const std::vector<CMat> parts{haar_unitary(2, rng), haar_unitary(1, rng)};
  const Channel ad = unitary_channel(a.commutant_element(parts));
  EXPECT_TRUE(same_map(reduce_channel(ad, a), unitary_channel(block_diag(parts)), 1e-10));
  EXPECT_EQ(reduce_channel(ad, a).canonical().kraus().size(), 1);
  // Injective: different channels stay different.
  EXPECT_FALSE(same_map(reduce_channel(phi, a), reduce_channel(psi, a), 1e-6));
}

TEST(ReduceChannel, ScalarAlgebraCollapses) {
  const auto a = AlgebraStructure::full(3);
  const Channel id = identity_channel(3);
  const Channel r = reduce_channel(id, a);
  EXPECT_EQ(r.dim(), 1);
}

TEST(ReduceChannel, NotFixedIsPrecondition) {
  Rng rng(30);
  EXPECT_ERROR_KIND(reduce_channel(random_unital_channel(3, 2, rng), AlgebraStructure::diagonal(3)),
                    ErrorKind::precondition);
}

TEST(CondexpAsMixedUnitary, Examples) {
  const auto s = condexp_as_mixed_unitary(AlgebraStructure::scalars(3));
  EXPECT_EQ(s.size(), 9u);
  EXPECT_LT(s.residual, 1e-12);
  const auto f = condexp_as_mixed_unitary(AlgebraStructure::full(3));
  EXPECT_EQ(f.size(), 1u);
  EXPECT_LT(dist(f.unitaries[0], CMat::Identity(3, 3)), 1e-14);
  const auto d2 = condexp_as_mixed_unitary(AlgebraStructure::diagonal(2));
  EXPECT_LT(dist(d2.reconstructed_choi(), map_to_diagonal(2).choi().mat), 1e-12);
  for (const auto& u : d2.unitaries) EXPECT_LT((u - CMat(u.diagonal().asDiagonal())).norm(), 1e-14);
}

TEST(CondexpAsMixedUnitary, GeneralBlocksAreExact) {
  Rng rng(31);
  const CMat v = haar_unitary(5, rng);
  for (const auto& blocks : std::vector<std::vector<Block>>{{{1, 2}, {1, 3}}, {{2, 2}, {1, 1}}, {{1, 1}, {1, 1}, {1, 3}}}) {
    const auto a = AlgebraStructure::from_standard_form(blocks, v);
    const auto dec = condexp_as_mixed_unitary(a);
    EXPECT_LT(dec.residual, 1e-10);
    EXPECT_TRUE(is_well_formed(dec));
    EXPECT_TRUE(atoms_in_commutant(dec, a, 1e-10));
  }
}

}  // namespace
}  // namespace muwork
