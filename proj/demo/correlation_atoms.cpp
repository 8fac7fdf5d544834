// Splits (C + (d-1) I) / d into rank-one correlation matrices, then does
// better with the rank of C.

#include <cstdio>

#include "muwork/muwork.hpp"

int main() {
  using namespace muwork;
  Rng rng(7);
  const CorrelationMatrix c = random_correlation(5, 2, rng);

  const auto quad = quadrature_decompose(c);
  std::printf("quadrature: p = 1/%ld, %zu atoms, residual %.2e\n", static_cast<long>(c.dim()), quad.atoms.size(),
              quad.residual);

  const auto mix = rank_r_mix(c, rng);
  std::printf("rank %ld:    p = %.3f, %zu atoms, residual %.2e\n", static_cast<long>(mix.rank), mix.p,
              mix.atoms.atoms.size(), mix.atoms.residual);

  const Channel schur = schur_channel(c);
  std::printf("Schur channel: Kraus rank %ld, unital %s\n", static_cast<long>(schur.kraus().size()),
              schur.is_unital_channel() ? "yes" : "no");
  return 0;
}
