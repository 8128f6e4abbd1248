#pragma once

#include <utility>
#include <vector>

#include "chainfill/slope.hpp"

namespace chainfill {

using IntMatrix = std::vector<std::vector<Int>>;

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Int determinant(const IntMatrix& m) {
  const size_t n = m.size();
  if (n == 0) return 1;
  std::vector<std::vector<Wide>> a(n, std::vector<Wide>(n));
  for (size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw Error("determinant of a non-square matrix");
    for (size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
  }
  Wide sign = 1, prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return narrow(sign * a[n - 1][n - 1]);
}

}  // namespace chainfill
