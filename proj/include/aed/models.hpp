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

#ifndef AED_MODELS_HPP_
#define AED_MODELS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aed/corpus.hpp"
#include "aed/features.hpp"
#include "aed/io.hpp"
#include "aed/softmax.hpp"
#include "aed/span_align.hpp"

namespace aed {

struct BaselineSpec {
  FeatureFamily family = FeatureFamily::kTextBow;
  int epochs = 20;
  double learning_rate = 1.0;
  double l2 = 1e-5;
  std::uint64_t seed = 0;
  int hash_bits = 16;
  // Span tasks only: how token rows are pooled into span rows.
  Aggregation aggregation = Aggregation::kMean;

  // Throws ConfigError for out-of-range values or a family that does not fit
  // the task.
  void validate(Task task) const;
  SgdSchedule schedule(std::uint64_t salt = 0) const;
  std::string name() const { return std::string(family_name(family)); }
};

// The three built-in families of a task, used as diverse-ensemble members.
std::vector<FeatureFamily> default_families(Task task);

// Training instances derived from a corpus: one per document for text
// classification, one per token otherwise. Span corpora are trained on BIO
// tags derived from the noisy spans.
struct TrainingSet {
  std::vector<SparseVector> x;
  std::vector<int> y;
  std::vector<std::size_t> doc;  // index into corpus.documents
  std::vector<std::string> labels;
  std::size_t dim = 0;
  // Span corpora only: the BIO tagset behind `labels`.
  std::optional<BioTagset> tagset;
  // Per corpus document, index of its first instance.
  std::vector<std::size_t> doc_offset;
};

TrainingSet build_training_set(const Corpus& corpus,
                               const BaselineSpec& spec);

// Pools instance-level rows (n_instances x labels) into unit rows over the
// corpus classes. Identity for text and token corpora; for span corpora the
// BIO rows of each span's tokens are collapsed and the no-entity mass is
// dropped before renormalizing.
std::vector<ProbRow> unit_rows(const TrainingSet& set,
                               std::span<const double> instance_probs,
                               std::span<const Unit> units,
                               std::size_t num_classes,
                               Aggregation aggregation);

// One model per fold, each trained on every document outside its fold. The
// two-argument form trains a single model on everything and predicts the
// same data.
class CrossValidatedModel {
 public:
  CrossValidatedModel(const Corpus& corpus, const BaselineSpec& spec,
                      const FoldAssignment& folds);
  CrossValidatedModel(const Corpus& corpus, const BaselineSpec& spec);

  // Holdout predictions, one row per unit.
  PredictionBundle predict() const;
  // T stochastic passes; each active feature is zeroed independently with
  // probability drop_rate (survivors scaled by 1 / (1 - drop_rate)).
  PredictionBundle predict_mc_dropout(int passes, double drop_rate,
                                      std::uint64_t seed) const;

  const std::vector<SoftmaxRegression>& fold_models() const { return models_; }
  const TrainingSet& training_set() const { return set_; }

 private:
  PredictionBundle to_bundle(const std::vector<double>& instance_probs,
                             std::size_t depth, BundleKind kind) const;

  const Corpus* corpus_;
  BaselineSpec spec_;
  std::vector<Unit> units_;
  TrainingSet set_;
  std::vector<int> instance_fold_;
  std::vector<SoftmaxRegression> models_;
};

PredictionBundle train_and_predict_cv(const Corpus& corpus,
                                      const BaselineSpec& spec,
                                      const FoldAssignment& folds);

// Trains once on everything and predicts the same data.
PredictionBundle train_and_predict_insample(const Corpus& corpus,
                                            const BaselineSpec& spec);

PredictionBundle predict_mc_dropout(const Corpus& corpus,
                                    const BaselineSpec& spec,
                                    const FoldAssignment& folds, int passes,
                                    double drop_rate);

enum class Schedule { kPlain, kCurriculum, kLeitner };

struct EpochRecord {
  // PerEpoch bundle: row e of a unit is its prediction after epoch e.
  PredictionBundle bundle;
  // Per unit, cross-entropy of the noisy label after each epoch in which the
  // unit was part of training (Plain: every epoch).
  std::vector<std::vector<double>> losses;
  // Leitner only: per unit, the deck it sat in during each epoch.
  std::vector<std::vector<int>> decks;
  // Curriculum only: per unit, the first epoch it was trained on.
  std::vector<int> introduced_at;
  // Curriculum only: per unit, loss of the preliminary one-epoch model.
  std::vector<double> preliminary_loss;
};

inline constexpr int kLeitnerDecks = 5;

// Plain supports an optional fold assignment (per-fold training, holdout
// rows recorded); Curriculum and Leitner train on the full corpus and apply
// to text classification only.
EpochRecord record_epoch_probs(const Corpus& corpus, const BaselineSpec& spec,
                               Schedule schedule,
                               const std::optional<FoldAssignment>& folds);

// Number of easiest deciles trained on in epoch e of E.
int curriculum_deciles(int epoch, int epochs);

// J logistic regressions under cross-validation, each on a different seeded
// Gaussian projection (d x d_proj, entries N(0, 1/d_proj)) of the embeddings.
// With folds == nullptr each member is trained and evaluated on everything.
std::vector<PredictionBundle> gaussian_projection_ensemble(
    const Corpus& corpus, const EmbeddingSet& embeddings, int members,
    std::size_t projected_dim, const FoldAssignment* folds,
    const BaselineSpec& spec);

// Deterministic TF-IDF unit vectors (words plus character trigrams, with
// context for tokens and spans) reduced to `dim` by a seeded Gaussian
// projection and L2-normalized.
EmbeddingSet builtin_embed(const Corpus& corpus, std::size_t dim = 256,
                           std::uint64_t seed = 0);

}  // namespace aed

#endif  // AED_MODELS_HPP_
