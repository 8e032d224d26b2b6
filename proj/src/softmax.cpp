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

#include "aed/softmax.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "aed/error.hpp"

namespace aed {

SoftmaxRegression::SoftmaxRegression(std::size_t dim, std::size_t num_classes)
    : dim_(dim), num_classes_(num_classes), weights_(dim * num_classes, 0.0) {
  if (num_classes_ == 0) throw Error("softmax model needs classes");
}

void SoftmaxRegression::sgd_epoch(std::span<const SparseVector> x,
                                  std::span<const int> y,
                                  std::span<const std::size_t> order,
                                  double learning_rate, double l2) {
  std::vector<double> p(num_classes_);
  const double decay = 1.0 - learning_rate * l2;
  for (std::size_t i : order) {
    const SparseVector& xi = x[i];
    predict(xi, p);
    p[std::size_t(y[i])] -= 1.0;
    for (std::size_t k = 0; k < xi.nnz(); ++k) {
      double* w = weights_.data() + std::size_t(xi.index[k]) * num_classes_;
      const double step = learning_rate * xi.value[k];
      for (std::size_t c = 0; c < num_classes_; ++c) {
        w[c] = w[c] * decay - step * p[c];
      }
    }
  }
}

void SoftmaxRegression::predict(const SparseVector& x, std::span<double> out,
                                std::span<const double> mask) const {
  kernels::predict_proba(view(), x, out, mask);
}

std::vector<double> SoftmaxRegression::predict_batch(
    std::span<const SparseVector> x) const {
  return kernels::parallel::predict_batch(view(), x);
}

double SgdSchedule::rate(int e) const {
  return learning_rate / std::sqrt(1.0 + static_cast<double>(e));
}

SoftmaxRegression fit_softmax(std::span<const SparseVector> x,
                              std::span<const int> y, std::size_t dim,
                              std::size_t num_classes,
                              std::span<const std::size_t> subset,
                              const SgdSchedule& schedule) {
  if (schedule.epochs < 1) throw ConfigError("epochs must be at least 1");
  SoftmaxRegression model(dim, num_classes);
  std::vector<std::size_t> order(subset.begin(), subset.end());
  std::mt19937_64 rng(schedule.seed);
  for (int e = 0; e < schedule.epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng);
    model.sgd_epoch(x, y, order, schedule.rate(e), schedule.l2);
  }
  return model;
}

}  // namespace aed
