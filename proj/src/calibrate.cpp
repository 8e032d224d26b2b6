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

#include "aed/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aed/error.hpp"

namespace aed {

CalibratorParams CalibratorParams::identity(std::size_t num_classes) {
  CalibratorParams p;
  p.num_classes = num_classes;
  p.W.assign(num_classes * num_classes, 0.0);
  for (std::size_t c = 0; c < num_classes; ++c) {
    p.W[c * num_classes + c] = 1.0;
  }
  p.b.assign(num_classes, 0.0);
  return p;
}

namespace {

void logits_of(const CalibratorParams& params, std::span<const double> logp,
               std::span<double> out) {
  const std::size_t C = params.num_classes;
  for (std::size_t c = 0; c < C; ++c) {
    double z = params.b[c];
    for (std::size_t k = 0; k < C; ++k) z += params.W[c * C + k] * logp[k];
    out[c] = z;
  }
}

void softmax_inplace(std::span<double> z) {
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

std::vector<double> log_probs(std::span<const double> probs) {
  std::vector<double> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out[i] = std::log(probs[i] + kCalibrationEps);
  }
  return out;
}

void check_inputs(std::span<const double> probs, std::span<const int> labels,
                  std::size_t num_classes) {
  if (num_classes == 0 || labels.empty()) {
    throw DataError("calibration needs at least one example");
  }
  if (probs.size() != labels.size() * num_classes) {
    throw DataError("probabilities and labels disagree in size");
  }
  for (int y : labels) {
    if (y < 0 || std::size_t(y) >= num_classes) {
      throw DataError("label out of range");
    }
  }
}

double nll_from_logp(const CalibratorParams& params,
                     const std::vector<double>& logp,
                     std::span<const int> labels) {
  const std::size_t C = params.num_classes;
  std::vector<double> z(C);
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    logits_of(params, {logp.data() + i * C, C}, z);
    const double mx = *std::max_element(z.begin(), z.end());
    double lse = 0.0;
    for (double v : z) lse += std::exp(v - mx);
    total += mx + std::log(lse) - z[std::size_t(labels[i])];
  }
  return total / static_cast<double>(labels.size());
}

}  // namespace

std::vector<double> CalibratorParams::apply(
    std::span<const double> probs) const {
  if (probs.size() % num_classes != 0) {
    throw DataError("probability rows do not match the calibrator");
  }
  const std::vector<double> logp = log_probs(probs);
  std::vector<double> out(probs.size());
  for (std::size_t i = 0; i * num_classes < probs.size(); ++i) {
    std::span<double> row(out.data() + i * num_classes, num_classes);
    logits_of(*this, {logp.data() + i * num_classes, num_classes}, row);
    softmax_inplace(row);
  }
  return out;
}

double calibration_nll(const CalibratorParams& params,
                       std::span<const double> probs,
                       std::span<const int> labels) {
  check_inputs(probs, labels, params.num_classes);
  return nll_from_logp(params, log_probs(probs), labels);
}

CalibratorParams fit_calibrator(std::span<const double> probs,
                                std::span<const int> labels,
                                std::size_t num_classes,
                                const CalibratorOptions& options) {
  check_inputs(probs, labels, num_classes);
  if (std::all_of(labels.begin(), labels.end(),
                  [&](int y) { return y == labels[0]; })) {
    throw DataError("calibration needs more than one observed class");
  }
  const std::size_t C = num_classes;
  const std::size_t n = labels.size();
  const std::vector<double> logp = log_probs(probs);

  CalibratorParams params = CalibratorParams::identity(C);
  CalibratorParams best = params;
  double best_nll = nll_from_logp(params, logp, labels);

  // Adam over the concatenation [W, b].
  const std::size_t P = C * C + C;
  std::vector<double> m(P, 0.0), v(P, 0.0), g(P);
  const double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;
  std::vector<double> z(C);
  for (int it = 1; it <= options.iterations; ++it) {
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::span<const double> li(logp.data() + i * C, C);
      logits_of(params, li, z);
      softmax_inplace(z);
      z[std::size_t(labels[i])] -= 1.0;
      for (std::size_t c = 0; c < C; ++c) {
        for (std::size_t k = 0; k < C; ++k) g[c * C + k] += z[c] * li[k];
        g[C * C + c] += z[c];
      }
    }
    const double bc1 = 1.0 - std::pow(beta1, it);
    const double bc2 = 1.0 - std::pow(beta2, it);
    for (std::size_t j = 0; j < P; ++j) {
      const double gj = g[j] / static_cast<double>(n);
      m[j] = beta1 * m[j] + (1.0 - beta1) * gj;
      v[j] = beta2 * v[j] + (1.0 - beta2) * gj * gj;
      const double step =
          options.learning_rate * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + adam_eps);
      if (j < C * C) {
        params.W[j] -= step;
      } else {
        params.b[j - C * C] -= step;
      }
    }
    const double nll = nll_from_logp(params, logp, labels);
    if (nll < best_nll) {
      best_nll = nll;
      best = params;
    }
  }
  return best;
}

double expected_calibration_error(std::span<const double> probs,
                                  std::span<const int> labels,
                                  std::size_t num_classes, int bins) {
  if (bins < 1) throw ConfigError("ECE needs at least one bin");
  check_inputs(probs, labels, num_classes);
  const std::size_t n = labels.size();
  std::vector<double> conf_sum(std::size_t(bins), 0.0);
  std::vector<double> acc_sum(std::size_t(bins), 0.0);
  std::vector<std::size_t> count(std::size_t(bins), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::span<const double> row(probs.data() + i * num_classes,
                                      num_classes);
    const auto best = std::max_element(row.begin(), row.end());
    const double conf = *best;
    const auto pred = static_cast<int>(best - row.begin());
    auto bin = static_cast<std::size_t>(conf * bins);
    bin = std::min(bin, std::size_t(bins) - 1);
    conf_sum[bin] += conf;
    acc_sum[bin] += pred == labels[i] ? 1.0 : 0.0;
    ++count[bin];
  }
  double ece = 0.0;
  for (std::size_t k = 0; k < std::size_t(bins); ++k) {
    if (count[k] == 0) continue;
    const double m = static_cast<double>(count[k]);
    ece += (m / static_cast<double>(n)) *
           std::abs(acc_sum[k] / m - conf_sum[k] / m);
  }
  return ece;
}

PredictionBundle calibrate_bundle(const PredictionBundle& bundle,
                                  std::span<const Unit> units,
                                  const CalibratorOptions& options) {
  check_covers(bundle, units);
  const std::size_t C = bundle.num_classes();
  std::vector<double> probs;
  std::vector<int> labels;
  for (std::size_t u = 0; u < bundle.size(); ++u) {
    for (std::size_t t = 0; t < bundle.depth(); ++t) {
      const auto row = bundle.row(u, t);
      probs.insert(probs.end(), row.begin(), row.end());
      labels.push_back(units[u].noisy_label);
    }
  }
  const CalibratorParams params = fit_calibrator(probs, labels, C, options);
  const std::vector<double> out = params.apply(probs);
  PredictionBundle result(bundle.model_name() + "+platt", bundle.classes(),
                          bundle.kind(), bundle.depth(), bundle.uids());
  std::size_t r = 0;
  for (std::size_t u = 0; u < bundle.size(); ++u) {
    for (std::size_t t = 0; t < bundle.depth(); ++t, ++r) {
      std::copy(out.begin() + std::ptrdiff_t(r * C),
                out.begin() + std::ptrdiff_t((r + 1) * C),
                result.row(u, t).begin());
    }
  }
  return result;
}

}  // namespace aed
