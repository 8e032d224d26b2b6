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

namespace aed {

DawidSkeneResult dawid_skene(std::span<const int> votes, std::size_t items,
                             std::size_t annotators, std::size_t classes,
                             const DawidSkeneOptions& options) {
  if (annotators < 2) throw ConfigError("Dawid-Skene needs 2+ annotators");
  if (classes == 0) throw ConfigError("Dawid-Skene needs classes");
  if (votes.size() != items * annotators) {
    throw DataError("vote matrix has the wrong size");
  }
  for (int v : votes) {
    if (v < 0 || std::size_t(v) >= classes) {
      throw DataError("vote out of class range");
    }
  }
  const std::size_t A = annotators;
  const std::size_t C = classes;
  DawidSkeneResult res;
  res.labels.assign(items, 0);
  if (items == 0) return res;

  // Soft majority vote.
  std::vector<double>& post = res.posterior;
  post.assign(items * C, 0.0);
  for (std::size_t i = 0; i < items; ++i) {
    for (std::size_t a = 0; a < A; ++a) {
      post[i * C + std::size_t(votes[i * A + a])] += 1.0 / double(A);
    }
  }

  std::vector<double> prior(C);
  // confusion[a][true c][observed l]
  std::vector<double> confusion(A * C * C);
  double prev_ll = -INFINITY;
  std::vector<double> logp(C);
  for (int it = 1; it <= options.max_iterations; ++it) {
    // M-step.
    std::fill(prior.begin(), prior.end(), 0.0);
    std::fill(confusion.begin(), confusion.end(), options.smoothing);
    for (std::size_t i = 0; i < items; ++i) {
      for (std::size_t c = 0; c < C; ++c) {
        const double w = post[i * C + c];
        prior[c] += w;
        for (std::size_t a = 0; a < A; ++a) {
          confusion[(a * C + c) * C + std::size_t(votes[i * A + a])] += w;
        }
      }
    }
    for (double& p : prior) {
      p = (p + options.smoothing) /
          (static_cast<double>(items) + options.smoothing * double(C));
    }
    for (std::size_t r = 0; r < A * C; ++r) {
      double s = 0.0;
      for (std::size_t l = 0; l < C; ++l) s += confusion[r * C + l];
      for (std::size_t l = 0; l < C; ++l) confusion[r * C + l] /= s;
    }
    // E-step.
    double ll = 0.0;
    for (std::size_t i = 0; i < items; ++i) {
      double mx = -INFINITY;
      for (std::size_t c = 0; c < C; ++c) {
        double lp = std::log(prior[c]);
        for (std::size_t a = 0; a < A; ++a) {
          lp += std::log(
              confusion[(a * C + c) * C + std::size_t(votes[i * A + a])]);
        }
        logp[c] = lp;
        mx = std::max(mx, lp);
      }
      double z = 0.0;
      for (std::size_t c = 0; c < C; ++c) z += std::exp(logp[c] - mx);
      for (std::size_t c = 0; c < C; ++c) {
        post[i * C + c] = std::exp(logp[c] - mx) / z;
      }
      ll += mx + std::log(z);
    }
    res.iterations = it;
    res.log_likelihood = ll;
    if (std::abs(ll - prev_ll) < options.tolerance) break;
    prev_ll = ll;
  }
  for (std::size_t i = 0; i < items; ++i) {
    const double* row = post.data() + i * C;
    res.labels[i] =
        static_cast<int>(std::max_element(row, row + C) - row);
  }
  return res;
}

}  // namespace aed
