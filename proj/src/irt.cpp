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

#include "aed/irt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "aed/error.hpp"

namespace aed {

namespace {

constexpr int kIrtFlipRounds = 3;
constexpr int kIrtFlipIterations = 500;

double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                  : std::exp(z) / (1.0 + std::exp(z));
}

double log_sigmoid(double z) {
  return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

class Adam {
 public:
  Adam(std::size_t n, double lr) : lr_(lr), m1_(n, 0.0), m2_(n, 0.0) {}

  // Ascent step: x += lr * m_hat / (sqrt(v_hat) + eps).
  void step(std::span<const double> grad, const std::function<double&(std::size_t)>& x) {
    bias1_ *= kBeta1;
    bias2_ *= kBeta2;
    for (std::size_t k = 0; k < m1_.size(); ++k) {
      m1_[k] = kBeta1 * m1_[k] + (1 - kBeta1) * grad[k];
      m2_[k] = kBeta2 * m2_[k] + (1 - kBeta2) * grad[k] * grad[k];
      x(k) += lr_ * (m1_[k] / (1 - bias1_)) /
              (std::sqrt(m2_[k] / (1 - bias2_)) + kEps);
    }
  }

 private:
  static constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  double lr_;
  double bias1_ = 1.0, bias2_ = 1.0;
  std::vector<double> m1_, m2_;
};

// Log posterior terms of item i given the abilities.
double item_log_posterior(const ResponseMatrix& r, std::span<const double> theta,
                          std::size_t i, double a, double b) {
  double lp = -0.5 * (a - 1.0) * (a - 1.0) - 0.5 * b * b;
  for (std::size_t s = 0; s < r.subjects; ++s) {
    const double z = a * (theta[s] - b);
    lp += r.at(s, i) ? log_sigmoid(z) : log_sigmoid(-z);
  }
  return lp;
}

void joint_ascent(const ResponseMatrix& r, IrtFit& fit, int iterations,
                  double lr) {
  const std::size_t S = r.subjects;
  const std::size_t I = r.items;
  // Gradient packed as [theta | a | b].
  std::vector<double> grad(S + 2 * I);
  Adam adam(grad.size(), lr);
  auto param = [&](std::size_t k) -> double& {
    return k < S ? fit.theta[k] : k < S + I ? fit.a[k - S] : fit.b[k - S - I];
  };
  for (int it = 0; it < iterations; ++it) {
    double* g_theta = grad.data();
    double* g_a = g_theta + S;
    double* g_b = g_a + I;
    for (std::size_t s = 0; s < S; ++s) g_theta[s] = -fit.theta[s];
    for (std::size_t i = 0; i < I; ++i) {
      g_a[i] = -(fit.a[i] - 1.0);
      g_b[i] = -fit.b[i];
    }
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t i = 0; i < I; ++i) {
        const double diff = fit.theta[s] - fit.b[i];
        const double resid = r.at(s, i) - sigmoid(fit.a[i] * diff);
        g_theta[s] += resid * fit.a[i];
        g_a[i] += resid * diff;
        g_b[i] -= resid * fit.a[i];
      }
    }
    adam.step(grad, param);
  }
}

// Refits item i with the abilities fixed, from starts whose discrimination
// has the opposite sign. Returns true and moves the item if one of them ends
// at a higher posterior.
bool try_item_flip(const ResponseMatrix& r, IrtFit& fit, std::size_t i,
                   int iterations, double lr) {
  const double sign = fit.a[i] >= 0.0 ? -1.0 : 1.0;
  const double starts[][2] = {{-fit.a[i], fit.b[i]}, {sign * 0.5, 0.0},
                              {sign * 1.5, -1.5},    {sign * 1.5, 0.0},
                              {sign * 1.5, 1.5}};
  double best = item_log_posterior(r, fit.theta, i, fit.a[i], fit.b[i]);
  bool moved = false;
  std::vector<double> grad(2);
  for (const auto& start : starts) {
    double ab[2] = {start[0], start[1]};
    Adam adam(2, lr);
    auto param = [&](std::size_t k) -> double& { return ab[k]; };
    for (int it = 0; it < iterations; ++it) {
      grad[0] = -(ab[0] - 1.0);
      grad[1] = -ab[1];
      for (std::size_t s = 0; s < r.subjects; ++s) {
        const double diff = fit.theta[s] - ab[1];
        const double resid = r.at(s, i) - sigmoid(ab[0] * diff);
        grad[0] += resid * diff;
        grad[1] -= resid * ab[0];
      }
      adam.step(grad, param);
    }
    const double lp = item_log_posterior(r, fit.theta, i, ab[0], ab[1]);
    if (lp > best + 1e-9) {
      best = lp;
      fit.a[i] = ab[0];
      fit.b[i] = ab[1];
      moved = true;
    }
  }
  return moved;
}

}  // namespace

ResponseMatrix response_matrix(std::span<const PredictionBundle> bundles,
                               std::span<const Unit> units) {
  ResponseMatrix r;
  r.subjects = bundles.size();
  r.items = units.size();
  r.data.resize(r.subjects * r.items);
  for (std::size_t s = 0; s < bundles.size(); ++s) {
    check_covers(bundles[s], units);
    for (std::size_t i = 0; i < units.size(); ++i) {
      const auto row = bundles[s].row(i);
      const auto pred = std::max_element(row.begin(), row.end()) - row.begin();
      r.data[s * r.items + i] = pred == units[i].noisy_label ? 1 : 0;
    }
  }
  return r;
}

double IrtFit::log_posterior(const ResponseMatrix& r) const {
  double lp = 0.0;
  for (std::size_t s = 0; s < r.subjects; ++s) {
    for (std::size_t i = 0; i < r.items; ++i) {
      const double z = a[i] * (theta[s] - b[i]);
      lp += r.at(s, i) ? log_sigmoid(z) : log_sigmoid(-z);
    }
  }
  for (double t : theta) lp -= 0.5 * t * t;
  for (double x : b) lp -= 0.5 * x * x;
  for (double x : a) lp -= 0.5 * (x - 1.0) * (x - 1.0);
  return lp;
}

IrtFit fit_irt_2pl(const ResponseMatrix& r, const IrtOptions& options) {
  if (r.subjects < 2 || r.items < 2) {
    throw DataError("IRT needs at least 2 subjects and 2 items");
  }
  if (r.data.size() != r.subjects * r.items) {
    throw DataError("response matrix has the wrong size");
  }
  const std::size_t S = r.subjects;
  const std::size_t I = r.items;
  IrtFit fit;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> jitter(0.0, 0.1);
  fit.theta.resize(S);
  fit.a.resize(I);
  fit.b.resize(I);
  for (double& t : fit.theta) t = jitter(rng);
  for (std::size_t i = 0; i < I; ++i) {
    fit.a[i] = 1.0 + jitter(rng);
    fit.b[i] = jitter(rng);
  }
  const std::size_t ones =
      std::accumulate(r.data.begin(), r.data.end(), std::size_t{0});
  fit.degenerate = ones == 0 || ones == r.data.size();

  joint_ascent(r, fit, options.iterations, options.learning_rate);
  // The item posterior given the abilities can have a second mode of the
  // opposite sign; move items there when it is higher, then re-settle.
  for (int round = 0; round < kIrtFlipRounds; ++round) {
    bool moved = false;
    for (std::size_t i = 0; i < I; ++i) {
      moved |= try_item_flip(r, fit, i, kIrtFlipIterations,
                             options.learning_rate);
    }
    if (!moved) break;
    joint_ascent(r, fit, options.iterations / 2, options.learning_rate);
  }

  const double mean_a =
      std::accumulate(fit.a.begin(), fit.a.end(), 0.0) / static_cast<double>(I);
  if (mean_a < 0.0) {
    for (double& t : fit.theta) t = -t;
    for (double& x : fit.a) x = -x;
    for (double& x : fit.b) x = -x;
  }
  return fit;
}

}  // namespace aed
