// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#ifndef SGP_MULTI_INDEX_HPP
#define SGP_MULTI_INDEX_HPP

#include <cstdint>
#include <vector>

namespace sgp {

/// Number of multi-indices a in N_0^d with |a| <= q, i.e. the dimension
/// binom(q + d, d) of the space of d-variate polynomials of total degree
/// at most q. Throws std::overflow_error if the result exceeds 2^31.
int monomial_dimension(int q, int d);

/// All multi-indices a in N_0^d with |a| <= q in graded lexicographic
/// order: sorted by total degree first, lexicographically within a degree.
struct MultiIndexSet {
  int degree = 0;
  int dim = 1;
  std::vector<std::vector<int>> indices;

  MultiIndexSet() = default;
  MultiIndexSet(int q, int d);

  int size() const { return static_cast<int>(indices.size()); }
};

}  // namespace sgp

#endif  // SGP_MULTI_INDEX_HPP
