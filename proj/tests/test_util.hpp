// Shared helpers for the unit tests.

#pragma once

#include <gtest/gtest.h>

#include "muwork/muwork.hpp"

namespace muwork::testing {

inline double dist(const CMat& a, const CMat& b) { return (a - b).norm(); }

/// Writes E_ij (x) Phi(E_ij) directly from the action of the map, the
/// textbook definition; the library stores the tensor factors swapped.
inline CMat choi_by_definition(const Channel& phi) {
  const Index d = phi.dim();
  CMat j = CMat::Zero(d * d, d * d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) j += kron(matrix_unit(d, a, b), phi.apply(matrix_unit(d, a, b)));
  return j;
}

/// Transfer matrix column by column: T e_(i,j) = vec(Phi(E_ij)).
inline CMat transfer_by_definition(const Channel& phi) {
  const Index d = phi.dim();
  CMat t(d * d, d * d);
  for (Index a = 0; a < d; ++a)
    for (Index b = 0; b < d; ++b) t.col(a * d + b) = vec(phi.apply(matrix_unit(d, a, b)));
  return t;
}

inline CMat swap_operator(Index d) {
  CMat s = CMat::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return s;
}

#define EXPECT_ERROR_KIND(stmt, k)                                 \
  do {                                                             \
    try {                                                          \
      stmt;                                                        \
      ADD_FAILURE() << "expected " << ::muwork::to_string(k);      \
    } catch (const ::muwork::Error& e) {                           \
      EXPECT_EQ(e.kind(), k) << e.what();                          \
    }                                                              \
  } while (0)

}  // namespace muwork::testing
