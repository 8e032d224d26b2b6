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

#ifndef AED_KERNELS_HPP_
#define AED_KERNELS_HPP_

// Data-parallel inner loops. Each kernel exists twice with identical
// signatures: `parallel::` (OpenMP, used by the library) and `serial::` (the
// reference the tests compare against). Both produce bitwise-identical
// results because every output element is computed by exactly one thread in
// a fixed order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace aed {

struct SparseVector {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  std::size_t nnz() const { return index.size(); }
};

// Dense row-major matrix view.
struct MatrixView {
  const double* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const double> row(std::size_t i) const {
    return {data + i * cols, cols};
  }
};

struct KnnResult {
  std::size_t k = 0;
  // rows x k, nearest first; ties broken by lower index.
  std::vector<std::size_t> index;
  std::vector<double> distance;
};

// Weights of a linear softmax model stored feature-major: w[f * C + c].
struct LinearModelView {
  const double* weights = nullptr;
  std::size_t dim = 0;
  std::size_t num_classes = 0;
};

namespace kernels {

double squared_distance(std::span<const double> a, std::span<const double> b);

// Softmax of w^T x into `out` (size num_classes). `mask`, when non-empty,
// holds one multiplier per non-zero of x.
void predict_proba(const LinearModelView& model, const SparseVector& x,
                   std::span<double> out, std::span<const double> mask = {});

namespace serial {

// k nearest neighbors by Euclidean distance. With include_self the point
// itself is one of the k neighbors (at distance 0); otherwise it is skipped.
KnnResult knn(const MatrixView& points, std::size_t k, bool include_self);

// Euclidean distance of each row to the mean of the rows sharing its label.
std::vector<double> centroid_distances(const MatrixView& points,
                                       std::span<const int> labels,
                                       int num_labels);

// points (n x d) times projection (d x p).
std::vector<double> project(const MatrixView& points,
                            const MatrixView& projection);

// Row-stochastic predictions (n x C) for a batch of sparse inputs.
std::vector<double> predict_batch(const LinearModelView& model,
                                  std::span<const SparseVector> inputs);

}  // namespace serial

namespace parallel {

KnnResult knn(const MatrixView& points, std::size_t k, bool include_self);
std::vector<double> centroid_distances(const MatrixView& points,
                                       std::span<const int> labels,
                                       int num_labels);
std::vector<double> project(const MatrixView& points,
                            const MatrixView& projection);
std::vector<double> predict_batch(const LinearModelView& model,
                                  std::span<const SparseVector> inputs);

}  // namespace parallel
}  // namespace kernels
}  // namespace aed

#endif  // AED_KERNELS_HPP_
