//
// Copyright 2026 The PRIVIC Authors
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
//

// Exact transportation LP by vertex enumeration, used as a test oracle for
// the production optimal-transport solver. Every optimal solution sits on a
// basic feasible solution whose support is a spanning tree of the bipartite
// supply/demand graph (at most 2m-1 edges), so enumerating all edge subsets
// of that size and solving each flow system visits every vertex of the
// polytope. Exponential, but exact — usable up to m = 4.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "privic/matrix.hpp"
#include "privic/prob.hpp"

namespace privic_test {

inline double emd_bruteforce(const privic::Pmf& from, const privic::Pmf& to,
                             const privic::Matrix& dist) {
  const std::size_t m = from.size();
  const std::size_t edges = m * m;
  const std::size_t basis = 2 * m - 1;
  std::vector<double> a(basis * basis), rhs(basis), f(basis);
  double best = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> comb(basis);
  for (std::size_t i = 0; i < basis; ++i) comb[i] = i;
  while (true) {
    // Constraint system restricted to the chosen edges: one row per supply,
    // one per demand except the last (redundant).
    std::fill(a.begin(), a.end(), 0.0);
    for (std::size_t k = 0; k < basis; ++k) {
      const std::size_t i = comb[k] / m;
      const std::size_t j = comb[k] % m;
      a[i * basis + k] = 1.0;
      if (j + 1 < m) a[(m + j) * basis + k] = 1.0;
    }
    for (std::size_t i = 0; i < m; ++i) rhs[i] = from[i];
    for (std::size_t j = 0; j + 1 < m; ++j) rhs[m + j] = to[j];

    // Gaussian elimination with partial pivoting; singular systems are
    // non-tree supports and get skipped.
    bool singular = false;
    std::vector<double> mat(a);
    std::vector<double> b(rhs);
    for (std::size_t col = 0; col < basis && !singular; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < basis; ++r)
        if (std::abs(mat[r * basis + col]) > std::abs(mat[piv * basis + col]))
          piv = r;
      if (std::abs(mat[piv * basis + col]) < 1e-9) {
        singular = true;
        break;
      }
      if (piv != col) {
        for (std::size_t c = 0; c < basis; ++c)
          std::swap(mat[piv * basis + c], mat[col * basis + c]);
        std::swap(b[piv], b[col]);
      }
      for (std::size_t r = col + 1; r < basis; ++r) {
        const double factor = mat[r * basis + col] / mat[col * basis + col];
        if (factor == 0.0) continue;
        for (std::size_t c = col; c < basis; ++c)
          mat[r * basis + c] -= factor * mat[col * basis + c];
        b[r] -= factor * b[col];
      }
    }
    if (!singular) {
      for (std::size_t r = basis; r-- > 0;) {
        double v = b[r];
        for (std::size_t c = r + 1; c < basis; ++c)
          v -= mat[r * basis + c] * f[c];
        f[r] = v / mat[r * basis + r];
      }
      bool feasible = true;
      double cost = 0.0;
      for (std::size_t k = 0; k < basis; ++k) {
        if (f[k] < -1e-10) {
          feasible = false;
          break;
        }
        cost += f[k] * dist(comb[k] / m, comb[k] % m);
      }
      if (feasible && cost < best) best = cost;
    }

    // Next lexicographic combination.
    std::size_t k = basis;
    bool done = false;
    while (k-- > 0) {
      if (comb[k] + (basis - k) < edges) {
        ++comb[k];
        for (std::size_t t = k + 1; t < basis; ++t) comb[t] = comb[t - 1] + 1;
        break;
      }
      if (k == 0) done = true;
    }
    if (done) return best;
  }
}

}  // namespace privic_test
