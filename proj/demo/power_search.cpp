// Finds the first power of the 3x3 antisymmetric Werner-Holevo channel that
// is certified mixed unitary and prints the decomposition.

#include <cstdio>

#include "muwork/muwork.hpp"

int main() {
  using namespace muwork;
  const Channel w = werner_holevo3();
  Rng rng(2026);
  const auto res = find_mixed_unitary_power(w, 8, ConstructOptions{}, rng);
  for (const auto& s : res.steps) {
    std::printf("k=%d  %-12s  min eigenvalue %+.4f\n", s.k, s.outcome.c_str(), s.min_eigenvalue);
  }
  if (!res.k) {
    std::printf("no certificate up to k=8\n");
    return 1;
  }
  const auto& dec = *res.decomposition;
  std::printf("W^%d = sum of %zu unitary conjugations, residual %.2e, p = %lld/%lld\n", *res.k, dec.size(),
              dec.residual, res.certificate->numerator, res.certificate->denominator);
  for (std::size_t i = 0; i < dec.size(); ++i) std::printf("  weight %.6f\n", dec.weights[i]);
  return 0;
}
