// This file is part of sgp, a samplet-based Gaussian process toolkit.
//
// Copyright (c) 2026, the sgp authors
//
// This source code is subject to the BSD 3-clause license, see the
// LICENSE file in the project root for further information.
#include "sgp/multi_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgp {

int monomial_dimension(int q, int d) {
  if (q < 0 || d < 1)
    throw std::invalid_argument("monomial_dimension: need q >= 0, d >= 1");
  // binom(q + d, d) computed incrementally with an overflow guard.
  std::int64_t result = 1;
  for (int i = 1; i <= d; ++i) {
    result = result * (q + i) / i;  // exact: product of i consecutive ints
    if (result > (std::int64_t{1} << 31))
      throw std::overflow_error("monomial_dimension: result exceeds 2^31");
  }
  return static_cast<int>(result);
}

MultiIndexSet::MultiIndexSet(int q, int d) : degree(q), dim(d) {
  if (q < 0 || d < 1)
    throw std::invalid_argument("MultiIndexSet: need q >= 0, d >= 1");
  indices.reserve(monomial_dimension(q, d));
  // Graded order: total degree ascending; within a degree, compositions in
  // lexicographically decreasing order starting from (total, 0, ..., 0).
  std::vector<int> alpha(d, 0);
  for (int total = 0; total <= q; ++total) {
    std::fill(alpha.begin(), alpha.end(), 0);
    alpha[0] = total;
    while (true) {
      indices.push_back(alpha);
      int k = d - 2;
      while (k >= 0 && alpha[k] == 0) --k;
      if (k < 0) break;
      alpha[k] -= 1;
      int carry = 1;
      for (int j = k + 1; j < d; ++j) {
        carry += alpha[j];
        alpha[j] = 0;
      }
      alpha[k + 1] = carry;
    }
  }
}

}  // namespace sgp
