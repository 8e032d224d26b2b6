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

#include <algorithm>
#include <cmath>

#include "aed/detect.hpp"
#include "aed/error.hpp"
#include "aed/kernels.hpp"

namespace aed {

namespace {

void check_embeddings(const EmbeddingSet& e, std::span<const Unit> units) {
  if (e.uids.size() != units.size() ||
      e.data.size() != units.size() * e.dim) {
    throw DataError("embeddings '" + e.name + "' do not cover the corpus");
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (e.uids[i] != units[i].uid) {
      throw DataError("embeddings '" + e.name + "': unexpected uid '" +
                      e.uids[i] + "'");
    }
  }
}

}  // namespace

ScoreVector mean_distance(const EmbeddingSet& embeddings,
                          std::span<const Unit> units,
                          std::size_t num_classes) {
  check_embeddings(embeddings, units);
  std::vector<int> labels;
  for (const Unit& u : units) labels.push_back(u.noisy_label);
  ScoreVector out;
  out.method = "MD";
  out.polarity = Polarity::kHighIsSuspicious;
  for (const Unit& u : units) out.uids.push_back(u.uid);
  out.scores = kernels::parallel::centroid_distances(
      MatrixView{embeddings.data.data(), units.size(), embeddings.dim}, labels,
      static_cast<int>(num_classes));
  return out;
}

ScoreVector knn_entropy(const EmbeddingSet& embeddings,
                        std::span<const Unit> units, std::size_t num_classes,
                        const KnnOptions& options) {
  check_embeddings(embeddings, units);
  if (options.k == 0) throw ConfigError("KNN needs k >= 1");
  const std::size_t n = units.size();
  const std::size_t available = options.include_self ? n : n - 1;
  const std::size_t k = std::min(options.k, available);
  ScoreVector out;
  out.method = "KNN";
  out.polarity = Polarity::kHighIsSuspicious;
  out.scores.assign(n, 0.0);
  for (const Unit& u : units) out.uids.push_back(u.uid);
  if (k == 0) return out;
  const KnnResult nn = kernels::parallel::knn(
      MatrixView{embeddings.data.data(), n, embeddings.dim}, k,
      options.include_self);
  std::vector<double> q(num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t* idx = nn.index.data() + i * k;
    const double* dist = nn.distance.data() + i * k;
    // softmax(-d); the nearest neighbor has the largest weight.
    const double shift = dist[0];
    double z = 0.0;
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const double w = std::exp(-(dist[j] - shift));
      q[std::size_t(units[idx[j]].noisy_label)] += w;
      z += w;
    }
    double h = 0.0;
    for (double x : q) {
      if (x > 0.0) h -= (x / z) * std::log(x / z);
    }
    out.scores[i] = h;
  }
  return out;
}

}  // namespace aed
