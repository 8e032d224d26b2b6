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

#ifndef AED_ASSIGNMENT_HPP_
#define AED_ASSIGNMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace aed {

// Exact minimum-cost assignment (Hungarian method with potentials) for a
// rows x cols row-major cost matrix. Every row is assigned a distinct column
// when rows <= cols, otherwise every column a distinct row. Returns the
// column of each row, or -1 for unassigned rows.
std::vector<int> solve_assignment(std::span<const std::int64_t> cost,
                                  std::size_t rows, std::size_t cols);

}  // namespace aed

#endif  // AED_ASSIGNMENT_HPP_
