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

#ifndef AED_SOFTMAX_HPP_
#define AED_SOFTMAX_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "aed/kernels.hpp"

namespace aed {

// Multinomial logistic regression over sparse inputs, trained by SGD.
class SoftmaxRegression {
 public:
  SoftmaxRegression(std::size_t dim, std::size_t num_classes);

  std::size_t dim() const { return dim_; }
  std::size_t num_classes() const { return num_classes_; }

  // One pass over the instances listed in `order`, in that order. L2 decay
  // is applied lazily to the weights an instance touches.
  void sgd_epoch(std::span<const SparseVector> x, std::span<const int> y,
                 std::span<const std::size_t> order, double learning_rate,
                 double l2);

  void predict(const SparseVector& x, std::span<double> out,
               std::span<const double> mask = {}) const;
  // n x C, OpenMP over instances.
  std::vector<double> predict_batch(std::span<const SparseVector> x) const;

  LinearModelView view() const {
    return {weights_.data(), dim_, num_classes_};
  }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::size_t dim_;
  std::size_t num_classes_;
  std::vector<double> weights_;
};

struct SgdSchedule {
  int epochs = 20;
  double learning_rate = 1.0;
  double l2 = 1e-5;
  std::uint64_t seed = 0;

  // Step size used in epoch `e` (0-based).
  double rate(int e) const;
};

// Trains on the instances in `subset` with a fresh seeded shuffle per epoch.
SoftmaxRegression fit_softmax(std::span<const SparseVector> x,
                              std::span<const int> y, std::size_t dim,
                              std::size_t num_classes,
                              std::span<const std::size_t> subset,
                              const SgdSchedule& schedule);

}  // namespace aed

#endif  // AED_SOFTMAX_HPP_
