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

#ifndef AED_EVAL_HPP_
#define AED_EVAL_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aed/corpus.hpp"
#include "aed/detect.hpp"

namespace aed {

struct FlaggerMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double pct_flagged = 0.0;
};

struct ScorerMetrics {
  // Absent when the corpus has no errors.
  std::optional<double> average_precision;
  std::string ap_absent_reason;
  double precision_at_10 = 0.0;
  double recall_at_10 = 0.0;
  std::size_t cutoff = 0;
};

struct EvalReport {
  std::string dataset;
  std::string task;
  std::string method;
  std::size_t n_units = 0;
  std::size_t n_errors = 0;
  std::optional<FlaggerMetrics> flagger;
  std::optional<ScorerMetrics> scorer;

  // F1 for flaggers, AP for scorers.
  std::optional<double> headline() const;
};

// is_error of every unit; throws DataError if one is unknown.
std::vector<bool> gold_errors(std::span<const Unit> units);

// ceil(fraction * n), robust to representation error in the product.
std::size_t top_cutoff(std::size_t n, double fraction);

// Unit indices from most to least suspicious; ties by uid ascending.
std::vector<std::size_t> suspicion_order(const ScoreVector& scores);

EvalReport eval_flagger(const FlagVector& flags, std::span<const Unit> units);
EvalReport eval_scorer(const ScoreVector& scores, std::span<const Unit> units);

// Flags the top ceil(fraction * n) units of the suspicion order.
FlagVector scorer_to_flags(const ScoreVector& scores, double fraction = 0.10);

// Harmonic mean; 0 if any value is 0. Throws on an empty input.
double harmonic_mean_summary(std::span<const double> values);

// Writes `#aed-report v1` TSV and a JSON record file with the same rows plus
// a per-method harmonic mean of the headline metric across datasets.
void write_report(std::span<const EvalReport> reports,
                  const std::filesystem::path& tsv_path,
                  const std::filesystem::path& json_path);
std::string report_tsv(std::span<const EvalReport> reports);
std::string report_json(std::span<const EvalReport> reports);
std::vector<EvalReport> parse_report_json(const std::string& text);

}  // namespace aed

#endif  // AED_EVAL_HPP_
