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

#ifndef AED_DETECT_HPP_
#define AED_DETECT_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aed/corpus.hpp"
#include "aed/io.hpp"
#include "aed/irt.hpp"
#include "aed/models.hpp"

namespace aed {

enum class Method {
  kCL, kCS, kDE, kIRT, kLA, kLS, kPE, kRE, kVN,
  kBC, kCU, kDM, kDU, kKNN, kLE, kMD, kPM, kWD,
};

std::string_view method_code(Method m);
// Case-insensitive two or three letter code, e.g. "re" or "KNN".
Method parse_method(std::string_view code);
std::vector<Method> all_methods();

bool is_scorer(Method m);
bool applies_to(Method m, Task task);

enum class Polarity { kHighIsSuspicious, kLowIsSuspicious };

Polarity method_polarity(Method m);
std::string_view polarity_name(Polarity p);

// Outputs are aligned to unit order.
struct FlagVector {
  std::string method;
  std::vector<std::string> uids;
  std::vector<bool> flags;

  std::size_t size() const { return uids.size(); }
  std::size_t count() const;
};

struct ScoreVector {
  std::string method;
  Polarity polarity = Polarity::kHighIsSuspicious;
  std::vector<std::string> uids;
  std::vector<double> scores;

  std::size_t size() const { return uids.size(); }
  // Larger means more suspicious, whatever the polarity.
  double suspicion(std::size_t i) const {
    return polarity == Polarity::kHighIsSuspicious ? scores[i] : -scores[i];
  }
};

// ---------------------------------------------------------------------------
// Flaggers

FlagVector retag(const PredictionBundle& bundle, std::span<const Unit> units);

// Per-class thresholds t_j = mean p(j) over units labeled j. A unit's
// estimated label is the most probable class k with p(k) >= t_k (lower index
// on ties); units meeting no threshold are not flagged. Classes without any
// labeled unit have no threshold and are never candidates.
FlagVector confident_learning(const PredictionBundle& bundle,
                              std::span<const Unit> units);

// Plurality over member argmaxes; plurality ties are not flagged.
FlagVector diverse_ensemble(std::span<const PredictionBundle> members,
                            std::span<const Unit> units);
FlagVector projection_ensemble(std::span<const PredictionBundle> members,
                               std::span<const Unit> units);

struct DawidSkeneOptions {
  int max_iterations = 100;
  double tolerance = 1e-6;
  // Added to every confusion count before normalizing.
  double smoothing = 1e-6;
};

struct DawidSkeneResult {
  std::vector<int> labels;
  // items x classes
  std::vector<double> posterior;
  int iterations = 0;
  double log_likelihood = 0.0;
};

// `votes` is items x annotators, each a class index.
DawidSkeneResult dawid_skene(std::span<const int> votes, std::size_t items,
                             std::size_t annotators, std::size_t classes,
                             const DawidSkeneOptions& options = {});

// Each pass of a repeated bundle acts as one annotator.
FlagVector label_aggregation(const PredictionBundle& repeated,
                             std::span<const Unit> units,
                             const DawidSkeneOptions& options = {});

// Flags items with negative discrimination.
FlagVector irt_flag(const IrtFit& fit, std::span<const Unit> units);

// Token corpora: maximal repeats (length >= 2) of the lowercased token
// stream. At each position of a repeat, the majority label is the unique most
// frequent label over the occurrences; there is none on ties. Flags units
// that are outvoted somewhere and hold the majority nowhere. Span corpora:
// the context of a span is (left token, span tokens, right token); spans
// whose label differs from the majority label of their context are flagged.
FlagVector variation_ngrams(const Corpus& corpus, std::span<const Unit> units);

// ---------------------------------------------------------------------------
// Scorers

ScoreVector classification_uncertainty(const PredictionBundle& bundle,
                                       std::span<const Unit> units);
ScoreVector prediction_margin(const PredictionBundle& bundle,
                              std::span<const Unit> units);
ScoreVector dropout_uncertainty(const PredictionBundle& repeated,
                                std::span<const Unit> units);
ScoreVector datamap_confidence(const PredictionBundle& per_epoch,
                               std::span<const Unit> units);
ScoreVector curriculum_spotter(const EpochRecord& record,
                               std::span<const Unit> units);
ScoreVector leitner_spotter(const EpochRecord& record,
                            std::span<const Unit> units);

// Surface form: the lowercased token, or the lowercased span tokens.
std::vector<std::string> surface_forms(const Corpus& corpus,
                                       std::span<const Unit> units);
ScoreVector label_entropy(const Corpus& corpus, std::span<const Unit> units);
ScoreVector weighted_discrepancy(const Corpus& corpus,
                                 std::span<const Unit> units);

ScoreVector mean_distance(const EmbeddingSet& embeddings,
                          std::span<const Unit> units, std::size_t num_classes);

struct KnnOptions {
  std::size_t k = 10;
  // Count the unit itself as a neighbor at distance 0.
  bool include_self = true;
};

ScoreVector knn_entropy(const EmbeddingSet& embeddings,
                        std::span<const Unit> units, std::size_t num_classes,
                        const KnnOptions& options = {});

// Sums rank points over the first `top` inputs (all if top is 0).
ScoreVector borda_count(std::span<const ScoreVector> scorers,
                        std::size_t top = 3);

// ---------------------------------------------------------------------------
// Serialization

void write_flags(const FlagVector& flags, const std::filesystem::path& path);
FlagVector read_flags(const std::filesystem::path& path,
                      std::span<const Unit> units);
void write_scores(const ScoreVector& scores,
                  const std::filesystem::path& path);
ScoreVector read_scores(const std::filesystem::path& path,
                        std::span<const Unit> units);

void check_covers(const FlagVector& flags, std::span<const Unit> units);
void check_covers(const ScoreVector& scores, std::span<const Unit> units);

}  // namespace aed

#endif  // AED_DETECT_HPP_
