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

#ifndef AED_IRT_HPP_
#define AED_IRT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "aed/corpus.hpp"
#include "aed/io.hpp"

namespace aed {

// Dense 0/1 matrix, subjects x items, row-major.
struct ResponseMatrix {
  std::size_t subjects = 0;
  std::size_t items = 0;
  std::vector<std::uint8_t> data;

  std::uint8_t at(std::size_t s, std::size_t i) const {
    return data[s * items + i];
  }
};

// R[s, i] = 1 iff the argmax of bundle s equals the noisy label of unit i.
ResponseMatrix response_matrix(std::span<const PredictionBundle> bundles,
                               std::span<const Unit> units);

struct IrtOptions {
  int iterations = 2000;
  double learning_rate = 0.05;
  std::uint64_t seed = 0;
};

// 2PL: P(R[s, i] = 1) = sigmoid(a_i * (theta_s - b_i)).
struct IrtFit {
  std::vector<double> theta;
  std::vector<double> a;
  std::vector<double> b;
  // All responses equal; the fit stays near the prior.
  bool degenerate = false;

  double log_posterior(const ResponseMatrix& r) const;
};

// MAP estimate under theta, b ~ N(0, 1) and a ~ N(1, 1) by full-batch
// gradient ascent. Ability gradients are scaled by 1 / items and item
// gradients by 1 / subjects. If mean(a) ends negative, theta, a and b are
// negated together.
IrtFit fit_irt_2pl(const ResponseMatrix& r, const IrtOptions& options = {});

}  // namespace aed

#endif  // AED_IRT_HPP_
