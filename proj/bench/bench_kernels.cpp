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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "aed/kernels.hpp"

namespace {

std::vector<double> random_matrix(std::size_t rows, std::size_t cols,
                                  unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> m(rows * cols);
  for (double& v : m) v = normal(rng);
  return m;
}

std::vector<aed::SparseVector> random_inputs(std::size_t n, std::size_t dim,
                                             std::size_t nnz, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, dim - 1);
  std::vector<aed::SparseVector> out(n);
  for (auto& x : out) {
    for (std::size_t j = 0; j < nnz; ++j) {
      x.index.push_back(pick(rng));
      x.value.push_back(1.0);
    }
  }
  return out;
}

template <bool Parallel>
void BM_Knn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> m = random_matrix(n, 64, 1);
  const aed::MatrixView view{m.data(), n, 64};
  for (auto _ : state) {
    auto r = Parallel ? aed::kernels::parallel::knn(view, 10, false)
                      : aed::kernels::serial::knn(view, 10, false);
    benchmark::DoNotOptimize(r.distance.data());
  }
  state.SetComplexityN(state.range(0));
}

template <bool Parallel>
void BM_Centroids(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> m = random_matrix(n, 256, 2);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % 5);
  const aed::MatrixView view{m.data(), n, 256};
  for (auto _ : state) {
    auto r = Parallel
                 ? aed::kernels::parallel::centroid_distances(view, labels, 5)
                 : aed::kernels::serial::centroid_distances(view, labels, 5);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_Project(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> m = random_matrix(n, 256, 3);
  const std::vector<double> p = random_matrix(256, 32, 4);
  const aed::MatrixView view{m.data(), n, 256};
  const aed::MatrixView proj{p.data(), 256, 32};
  for (auto _ : state) {
    auto r = Parallel ? aed::kernels::parallel::project(view, proj)
                      : aed::kernels::serial::project(view, proj);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_PredictBatch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t dim = 1 << 16, classes = 9;
  const std::vector<double> w = random_matrix(dim, classes, 5);
  const aed::LinearModelView model{w.data(), dim, classes};
  const auto inputs = random_inputs(n, dim, 24, 6);
  for (auto _ : state) {
    auto r = Parallel ? aed::kernels::parallel::predict_batch(model, inputs)
                      : aed::kernels::serial::predict_batch(model, inputs);
    benchmark::DoNotOptimize(r.data());
  }
}

}  // namespace

BENCHMARK(BM_Knn<false>)->Arg(500)->Arg(2000);
BENCHMARK(BM_Knn<true>)->Arg(500)->Arg(2000);
BENCHMARK(BM_Centroids<false>)->Arg(10000);
BENCHMARK(BM_Centroids<true>)->Arg(10000);
BENCHMARK(BM_Project<false>)->Arg(10000);
BENCHMARK(BM_Project<true>)->Arg(10000);
BENCHMARK(BM_PredictBatch<false>)->Arg(20000);
BENCHMARK(BM_PredictBatch<true>)->Arg(20000);

BENCHMARK_MAIN();
