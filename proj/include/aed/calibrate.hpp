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

#ifndef AED_CALIBRATE_HPP_
#define AED_CALIBRATE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "aed/io.hpp"

namespace aed {

// p' = softmax(W log(p + eps) + b), W is C x C row-major.
struct CalibratorParams {
  std::size_t num_classes = 0;
  std::vector<double> W;
  std::vector<double> b;

  static CalibratorParams identity(std::size_t num_classes);
  std::vector<double> apply(std::span<const double> probs) const;
};

inline constexpr double kCalibrationEps = 1e-12;

struct CalibratorOptions {
  int iterations = 500;
  double learning_rate = 0.05;
};

// Fits the map on n x C probabilities against labels by Adam on the mean
// negative log-likelihood, starting from the identity. Returns the iterate
// with the lowest NLL seen, so the result never fits worse than the start.
CalibratorParams fit_calibrator(std::span<const double> probs,
                                std::span<const int> labels,
                                std::size_t num_classes,
                                const CalibratorOptions& options = {});

// Mean negative log-likelihood of `labels` under the calibrated rows.
double calibration_nll(const CalibratorParams& params,
                       std::span<const double> probs,
                       std::span<const int> labels);

// Equal-width bins over [0, 1] on the max probability.
double expected_calibration_error(std::span<const double> probs,
                                  std::span<const int> labels,
                                  std::size_t num_classes, int bins = 10);

// Fits on the bundle's rows against its noisy labels and returns a new
// bundle of calibrated rows. Repeated and per-epoch bundles reuse one map
// fitted on all rows.
PredictionBundle calibrate_bundle(const PredictionBundle& bundle,
                                  std::span<const Unit> units,
                                  const CalibratorOptions& options = {});

}  // namespace aed

#endif  // AED_CALIBRATE_HPP_
