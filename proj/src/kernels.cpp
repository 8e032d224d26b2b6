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

#include "aed/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "aed/error.hpp"

namespace aed::kernels {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

void predict_proba(const LinearModelView& model, const SparseVector& x,
                   std::span<double> out, std::span<const double> mask) {
  const std::size_t c_count = model.num_classes;
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t k = 0; k < x.nnz(); ++k) {
    const double v = mask.empty() ? x.value[k] : x.value[k] * mask[k];
    if (v == 0.0) continue;
    const double* w = model.weights + std::size_t(x.index[k]) * c_count;
    for (std::size_t c = 0; c < c_count; ++c) out[c] += w[c] * v;
  }
  const double max_logit = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& z : out) {
    z = std::exp(z - max_logit);
    total += z;
  }
  for (double& z : out) z /= total;
}

namespace {

void check_knn(const MatrixView& points, std::size_t k, bool include_self) {
  const std::size_t available = include_self ? points.rows : points.rows - 1;
  if (points.rows == 0 || k == 0 || k > available) {
    throw DataError("k-NN needs k in [1, " + std::to_string(available) +
                    "], got " + std::to_string(k));
  }
}

void knn_row(const MatrixView& points, std::size_t i, std::size_t k,
             bool include_self, std::vector<std::pair<double, std::size_t>>& buf,
             KnnResult& out) {
  buf.clear();
  for (std::size_t j = 0; j < points.rows; ++j) {
    if (j == i) {
      if (include_self) buf.emplace_back(0.0, j);
      continue;
    }
    buf.emplace_back(squared_distance(points.row(i), points.row(j)), j);
  }
  std::partial_sort(buf.begin(), buf.begin() + static_cast<long>(k), buf.end());
  for (std::size_t r = 0; r < k; ++r) {
    out.index[i * k + r] = buf[r].second;
    out.distance[i * k + r] = std::sqrt(buf[r].first);
  }
}

std::vector<double> centroids(const MatrixView& points,
                              std::span<const int> labels, int num_labels,
                              std::vector<std::size_t>& counts) {
  std::vector<double> sums(std::size_t(num_labels) * points.cols, 0.0);
  counts.assign(std::size_t(num_labels), 0);
  for (std::size_t i = 0; i < points.rows; ++i) {
    const int l = labels[i];
    if (l < 0 || l >= num_labels) throw DataError("label out of range");
    ++counts[l];
    auto row = points.row(i);
    for (std::size_t d = 0; d < points.cols; ++d) {
      sums[std::size_t(l) * points.cols + d] += row[d];
    }
  }
  for (int l = 0; l < num_labels; ++l) {
    if (counts[l] == 0) continue;
    for (std::size_t d = 0; d < points.cols; ++d) {
      sums[std::size_t(l) * points.cols + d] /= double(counts[l]);
    }
  }
  return sums;
}

}  // namespace

namespace serial {

KnnResult knn(const MatrixView& points, std::size_t k, bool include_self) {
  check_knn(points, k, include_self);
  KnnResult out;
  out.k = k;
  out.index.resize(points.rows * k);
  out.distance.resize(points.rows * k);
  std::vector<std::pair<double, std::size_t>> buf;
  for (std::size_t i = 0; i < points.rows; ++i) {
    knn_row(points, i, k, include_self, buf, out);
  }
  return out;
}

std::vector<double> centroid_distances(const MatrixView& points,
                                       std::span<const int> labels,
                                       int num_labels) {
  std::vector<std::size_t> counts;
  const std::vector<double> c = centroids(points, labels, num_labels, counts);
  std::vector<double> out(points.rows);
  for (std::size_t i = 0; i < points.rows; ++i) {
    std::span<const double> centroid(c.data() + labels[i] * points.cols,
                                     points.cols);
    out[i] = std::sqrt(squared_distance(points.row(i), centroid));
  }
  return out;
}

std::vector<double> project(const MatrixView& points,
                            const MatrixView& projection) {
  if (points.cols != projection.rows) {
    throw DataError("projection shape mismatch");
  }
  const std::size_t p = projection.cols;
  std::vector<double> out(points.rows * p, 0.0);
  for (std::size_t i = 0; i < points.rows; ++i) {
    for (std::size_t d = 0; d < points.cols; ++d) {
      const double x = points.data[i * points.cols + d];
      const double* r = projection.data + d * p;
      for (std::size_t j = 0; j < p; ++j) out[i * p + j] += x * r[j];
    }
  }
  return out;
}

std::vector<double> predict_batch(const LinearModelView& model,
                                  std::span<const SparseVector> inputs) {
  std::vector<double> out(inputs.size() * model.num_classes);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    predict_proba(model, inputs[i],
                  {out.data() + i * model.num_classes, model.num_classes});
  }
  return out;
}

}  // namespace serial

namespace parallel {

KnnResult knn(const MatrixView& points, std::size_t k, bool include_self) {
  check_knn(points, k, include_self);
  KnnResult out;
  out.k = k;
  out.index.resize(points.rows * k);
  out.distance.resize(points.rows * k);
  const auto n = static_cast<long>(points.rows);
#pragma omp parallel
  {
    std::vector<std::pair<double, std::size_t>> buf;
#pragma omp for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
      knn_row(points, std::size_t(i), k, include_self, buf, out);
    }
  }
  return out;
}

std::vector<double> centroid_distances(const MatrixView& points,
                                       std::span<const int> labels,
                                       int num_labels) {
  std::vector<std::size_t> counts;
  const std::vector<double> c = centroids(points, labels, num_labels, counts);
  std::vector<double> out(points.rows);
  const auto n = static_cast<long>(points.rows);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    std::span<const double> centroid(c.data() + labels[i] * points.cols,
                                     points.cols);
    out[i] = std::sqrt(squared_distance(points.row(std::size_t(i)), centroid));
  }
  return out;
}

std::vector<double> project(const MatrixView& points,
                            const MatrixView& projection) {
  if (points.cols != projection.rows) {
    throw DataError("projection shape mismatch");
  }
  const std::size_t p = projection.cols;
  std::vector<double> out(points.rows * p, 0.0);
  const auto n = static_cast<long>(points.rows);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < points.cols; ++d) {
      const double x = points.data[std::size_t(i) * points.cols + d];
      const double* r = projection.data + d * p;
      double* o = out.data() + std::size_t(i) * p;
#pragma omp simd
      for (std::size_t j = 0; j < p; ++j) o[j] += x * r[j];
    }
  }
  return out;
}

std::vector<double> predict_batch(const LinearModelView& model,
                                  std::span<const SparseVector> inputs) {
  std::vector<double> out(inputs.size() * model.num_classes);
  const auto n = static_cast<long>(inputs.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    predict_proba(model, inputs[std::size_t(i)],
                  {out.data() + std::size_t(i) * model.num_classes,
                   model.num_classes});
  }
  return out;
}

}  // namespace parallel
}  // namespace aed::kernels
