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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "aed/assignment.hpp"
#include "aed/features.hpp"
#include "aed/kernels.hpp"
#include "aed/softmax.hpp"

namespace aed {
namespace {

std::vector<double> random_matrix(std::size_t rows, std::size_t cols,
                                  unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> m(rows * cols);
  for (double& v : m) v = normal(rng);
  return m;
}

TEST(Kernels, KnnMatchesExhaustiveScan) {
  const std::size_t n = 120, d = 7, k = 5;
  const auto m = random_matrix(n, d, 1);
  const MatrixView view{m.data(), n, d};
  for (bool self : {false, true}) {
    const KnnResult s = kernels::serial::knn(view, k, self);
    const KnnResult p = kernels::parallel::knn(view, k, self);
    EXPECT_EQ(s.index, p.index);
    EXPECT_EQ(s.distance, p.distance);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::pair<double, std::size_t>> all;
      for (std::size_t j = 0; j < n; ++j) {
        if (!self && j == i) continue;
        double dist = 0;
        for (std::size_t c = 0; c < d; ++c) {
          dist += std::pow(m[i * d + c] - m[j * d + c], 2);
        }
        all.emplace_back(std::sqrt(dist), j);
      }
      std::sort(all.begin(), all.end());
      for (std::size_t r = 0; r < k; ++r) {
        EXPECT_EQ(s.index[i * k + r], all[r].second);
        EXPECT_NEAR(s.distance[i * k + r], all[r].first, 1e-12);
      }
      if (self) EXPECT_EQ(s.index[i * k], i);
    }
  }
}

TEST(Kernels, KnnTiesByLowerIndex) {
  const std::vector<double> m = {0, 0, 1, 0, -1, 0, 0, 1};
  const KnnResult r = kernels::serial::knn(MatrixView{m.data(), 4, 2}, 2, false);
  EXPECT_EQ(r.index[0], 1u);
  EXPECT_EQ(r.index[1], 2u);
}

TEST(Kernels, CentroidDistances) {
  const std::vector<double> m = {0, 0, 2, 0, 5, 5};
  const std::vector<int> labels = {0, 0, 1};
  const MatrixView view{m.data(), 3, 2};
  for (const auto& r : {kernels::serial::centroid_distances(view, labels, 2),
                        kernels::parallel::centroid_distances(view, labels, 2)}) {
    EXPECT_DOUBLE_EQ(r[0], 1.0);
    EXPECT_DOUBLE_EQ(r[1], 1.0);
    EXPECT_DOUBLE_EQ(r[2], 0.0);
  }
}

TEST(Kernels, SerialAndParallelAgree) {
  const std::size_t n = 300, d = 40, p = 8;
  const auto m = random_matrix(n, d, 2);
  const auto proj = random_matrix(d, p, 3);
  const MatrixView view{m.data(), n, d};
  const MatrixView pv{proj.data(), d, p};
  EXPECT_EQ(kernels::serial::project(view, pv),
            kernels::parallel::project(view, pv));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = int(i % 3);
  const auto a = kernels::serial::centroid_distances(view, labels, 3);
  const auto b = kernels::parallel::centroid_distances(view, labels, 3);
  for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);

  const std::size_t dim = 64, C = 4;
  const auto w = random_matrix(dim, C, 4);
  const LinearModelView model{w.data(), dim, C};
  std::vector<SparseVector> xs(50);
  std::mt19937_64 rng(5);
  for (auto& x : xs) {
    for (int j = 0; j < 6; ++j) {
      x.index.push_back(static_cast<std::uint32_t>(rng() % dim));
      x.value.push_back(0.5);
    }
  }
  EXPECT_EQ(kernels::serial::predict_batch(model, xs),
            kernels::parallel::predict_batch(model, xs));
}

TEST(Kernels, ProjectMatchesHandProduct) {
  const std::vector<double> m = {1, 2, 3, 4};
  const std::vector<double> p = {1, 0, 1, 0, 1, 1};
  const auto r = kernels::serial::project(MatrixView{m.data(), 2, 2},
                                          MatrixView{p.data(), 2, 3});
  EXPECT_EQ(r, (std::vector<double>{1, 2, 3, 3, 4, 7}));
}

TEST(Kernels, PredictProbaSoftmaxAndMask) {
  // Two features, two classes; w[f * C + c].
  const std::vector<double> w = {1, 0, 0, 2};
  const LinearModelView model{w.data(), 2, 2};
  SparseVector x;
  x.index = {0, 1};
  x.value = {1.0, 1.0};
  std::vector<double> out(2);
  kernels::predict_proba(model, x, out);
  EXPECT_NEAR(out[0], 1.0 / (1.0 + std::exp(1.0)), 1e-12);
  EXPECT_NEAR(out[0] + out[1], 1.0, 1e-15);
  const std::vector<double> mask = {1.0, 0.0};
  kernels::predict_proba(model, x, out, mask);
  EXPECT_NEAR(out[0], 1.0 / (1.0 + std::exp(-1.0)), 1e-12);
  SparseVector empty;
  kernels::predict_proba(model, empty, out);
  EXPECT_DOUBLE_EQ(out[0], 0.5);
}

TEST(Features, HashingIsPureAndNormalized) {
  const std::vector<std::string> tokens = {"the", "club", "opened", "the"};
  const auto f = text_features(FeatureFamily::kTextBow, tokens);
  EXPECT_EQ(f, text_features(FeatureFamily::kTextBow, tokens));
  const SparseVector x = hash_features(f, 12);
  ASSERT_FALSE(x.index.empty());
  EXPECT_EQ(x.index.back(), 1u << 12);
  double norm = 0;
  for (std::size_t i = 0; i + 1 < x.nnz(); ++i) norm += x.value[i] * x.value[i];
  EXPECT_NEAR(norm, 1.0, 1e-12);
  EXPECT_TRUE(std::is_sorted(x.index.begin(), x.index.end()));
}

TEST(Features, TokenWindowSeesNeighbors) {
  const std::vector<std::string> tokens = {"a", "red", "car"};
  const auto f = token_features(FeatureFamily::kTokenWindow, tokens, 1);
  const auto g = token_features(FeatureFamily::kTokenWindow,
                                std::vector<std::string>{"a", "red", "bus"}, 1);
  EXPECT_NE(f, g);
  EXPECT_EQ(parse_family(family_name(FeatureFamily::kTokenSuffix)),
            FeatureFamily::kTokenSuffix);
}

TEST(Features, SeedsAndHashesStable) {
  EXPECT_EQ(fnv1a(""), 14695981039346656037ull);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
  EXPECT_EQ(mix_seed(3, 4), mix_seed(3, 4));
}

TEST(Softmax, LearnsSeparableData) {
  std::vector<SparseVector> x(40);
  std::vector<int> y(40);
  for (int i = 0; i < 40; ++i) {
    y[i] = i % 2;
    x[i].index = {static_cast<std::uint32_t>(y[i]), 2};
    x[i].value = {1.0, 1.0};
  }
  std::vector<std::size_t> all(40);
  std::iota(all.begin(), all.end(), 0);
  SgdSchedule s;
  s.epochs = 5;
  const SoftmaxRegression m = fit_softmax(x, y, 3, 2, all, s);
  const auto p = m.predict_batch(x);
  for (int i = 0; i < 40; ++i) EXPECT_GT(p[i * 2 + y[i]], 0.9);
  EXPECT_EQ(p, fit_softmax(x, y, 3, 2, all, s).predict_batch(x));
}

std::int64_t brute_assignment(const std::vector<std::int64_t>& cost,
                              std::size_t rows, std::size_t cols) {
  std::vector<std::size_t> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = INT64_MAX;
  do {
    std::int64_t total = 0;
    for (std::size_t r = 0; r < rows; ++r) total += cost[r * cols + perm[r]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

TEST(Assignment, MatchesPermutationSearch) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    const std::size_t rows = 1 + rng() % 5;
    const std::size_t cols = rows + rng() % 3;
    std::vector<std::int64_t> cost(rows * cols);
    for (auto& c : cost) c = static_cast<std::int64_t>(rng() % 20) - 5;
    const std::vector<int> a = solve_assignment(cost, rows, cols);
    std::int64_t total = 0;
    std::vector<int> used(cols, 0);
    for (std::size_t r = 0; r < rows; ++r) {
      ASSERT_GE(a[r], 0);
      EXPECT_EQ(++used[a[r]], 1);
      total += cost[r * cols + a[r]];
    }
    EXPECT_EQ(total, brute_assignment(cost, rows, cols));
  }
}

TEST(Assignment, MoreRowsThanColumns) {
  const std::vector<std::int64_t> cost = {5, 1, 2};
  const std::vector<int> a = solve_assignment(cost, 3, 1);
  EXPECT_EQ(std::count(a.begin(), a.end(), -1), 2);
  EXPECT_EQ(a[1], 0);
}

}  // namespace
}  // namespace aed
