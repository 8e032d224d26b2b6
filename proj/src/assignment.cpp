// Copyright 2026 The aedkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aed/assignment.hpp"

#include <algorithm>
#include <limits>

#include "aed/error.hpp"

namespace aed {
namespace {

// Classic O(n^2 m) shortest augmenting path with dual potentials; requires
// n <= m. Indices are 1-based internally, column 0 is a virtual source.
std::vector<int> hungarian(std::span<const std::int64_t> cost, std::size_t n,
                           std::size_t m) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = static_cast<int>(j - 1);
  }
  return assignment;
}

}  // namespace

std::vector<int> solve_assignment(std::span<const std::int64_t> cost,
                                  std::size_t rows, std::size_t cols) {
  if (cost.size() != rows * cols) {
    throw Error("solve_assignment: cost matrix has wrong size");
  }
  if (rows == 0 || cols == 0) return std::vector<int>(rows, -1);
  if (rows <= cols) return hungarian(cost, rows, cols);

  std::vector<std::int64_t> transposed(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      transposed[j * rows + i] = cost[i * cols + j];
    }
  }
  const std::vector<int> by_col = hungarian(transposed, cols, rows);
  std::vector<int> assignment(rows, -1);
  for (std::size_t j = 0; j < cols; ++j) {
    if (by_col[j] >= 0) assignment[by_col[j]] = static_cast<int>(j);
  }
  return assignment;
}

}  // namespace aed
