#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "magicflow/errors.hpp"

namespace magicflow {

// Elements of S_D in lexicographic one-line order with composition, inverse,
// and cycle-count tables. q_eff = D! is capped at 120.
struct SymmetricGroupTable {
  int D = 1;
  std::vector<std::vector<int>> elements;
  std::vector<std::vector<int>> compose;  // compose[i][j] = index of e_i after e_j
  std::vector<int> inverse;
  std::vector<int> cycles;

  int order() const { return static_cast<int>(elements.size()); }

  static SymmetricGroupTable build(int D) {
    if (D < 1 || D > 5)
      throw ResourceError("SymmetricGroupTable: D must be in [1, 5] (q_eff <= 120)");
    SymmetricGroupTable t;
    t.D = D;
    std::vector<int> perm(D);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      t.elements.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const int n = t.order();

    auto index_of = [&](const std::vector<int>& p) {
      const auto it = std::lower_bound(t.elements.begin(), t.elements.end(), p);
      return static_cast<int>(it - t.elements.begin());
    };

    t.compose.assign(n, std::vector<int>(n, 0));
    t.inverse.assign(n, 0);
    t.cycles.assign(n, 0);
    std::vector<int> scratch(D);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        // (e_i o e_j)(x) = e_i(e_j(x))
        for (int x = 0; x < D; ++x) scratch[x] = t.elements[i][t.elements[j][x]];
        t.compose[i][j] = index_of(scratch);
      }
      for (int x = 0; x < D; ++x) scratch[t.elements[i][x]] = x;
      t.inverse[i] = index_of(scratch);

      std::vector<bool> seen(D, false);
      int c = 0;
      for (int x = 0; x < D; ++x) {
        if (seen[x]) continue;
        ++c;
        int y = x;
        while (!seen[y]) {
          seen[y] = true;
          y = t.elements[i][y];
        }
      }
      t.cycles[i] = c;
    }
    return t;
  }

  int index_of(const std::vector<int>& p) const {
    const auto it = std::lower_bound(elements.begin(), elements.end(), p);
    if (it == elements.end() || *it != p) throw UsageError("unknown permutation");
    return static_cast<int>(it - elements.begin());
  }

  // number of cycles of e_i^{-1} o e_j
  int relative_cycles(int i, int j) const { return cycles[compose[inverse[i]][j]]; }
};

inline SymmetricGroupTable enumerate_permutations(int D) {
  return SymmetricGroupTable::build(D);
}

}  // namespace magicflow
