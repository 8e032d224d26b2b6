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

#include <cmath>
#include <random>
#include <set>

#include "aed/error.hpp"
#include "aed/irt.hpp"
#include "aed/models.hpp"
#include "aed/synth.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace aed {
namespace {

std::size_t argmax(std::span<const double> row) {
  return static_cast<std::size_t>(
      std::max_element(row.begin(), row.end()) - row.begin());
}

Corpus small_text(std::size_t n = 200, std::uint64_t seed = 1) {
  TextSynthOptions o;
  o.documents = n;
  o.seed = seed;
  return synth_text_corpus(o);
}

BaselineSpec text_spec(int epochs = 20) {
  BaselineSpec s;
  s.family = FeatureFamily::kTextBow;
  s.epochs = epochs;
  return s;
}

double accuracy(const PredictionBundle& b, const std::vector<Unit>& units) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    hit += argmax(b.row(i)) == std::size_t(units[i].noisy_label);
  }
  return double(hit) / double(units.size());
}

void expect_stochastic(const PredictionBundle& b) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    for (std::size_t t = 0; t < b.depth(); ++t) {
      double s = 0;
      for (double p : b.row(i, t)) {
        EXPECT_GE(p, 0.0);
        s += p;
      }
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
  }
}

TEST(Spec, Validation) {
  BaselineSpec s;
  s.family = FeatureFamily::kTokenWindow;
  EXPECT_THROW(s.validate(Task::kText), ConfigError);
  EXPECT_NO_THROW(s.validate(Task::kSpan));
  s.hash_bits = 30;
  EXPECT_THROW(s.validate(Task::kToken), ConfigError);
  EXPECT_EQ(default_families(Task::kText).size(), 3u);
  EXPECT_EQ(default_families(Task::kToken).size(), 3u);
}

TEST(CrossValidation, SeparableCorpusAccuracy) {
  const Corpus c = small_text(400);
  const auto units = extract_units(c);
  const PredictionBundle b =
      train_and_predict_cv(c, text_spec(), make_folds(c, 10, 1));
  EXPECT_GE(accuracy(b, units), 0.95);
  expect_stochastic(b);
}

TEST(CrossValidation, CoverAndDeterminism) {
  const Corpus c = small_text(1000);
  const FoldAssignment f = make_folds(c, 10, 3);
  const PredictionBundle a = train_and_predict_cv(c, text_spec(5), f);
  EXPECT_EQ(a.size(), 1000u);
  check_covers(a, extract_units(c));
  const PredictionBundle b = train_and_predict_cv(c, text_spec(5), f);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(a.row(i)[k], b.row(i)[k]);
  }
}

TEST(CrossValidation, HoldoutNeverSeesItsDocument) {
  // Every document is a unique word with a random label: only a model that
  // saw the document can predict its label.
  std::mt19937_64 rng(4);
  std::vector<int> labels(300);
  for (int& l : labels) l = int(rng() % 2);
  Corpus c = testing::text_corpus(labels);
  for (std::size_t i = 0; i < c.documents.size(); ++i) {
    c.documents[i].text = "w" + std::to_string(i * 7919);
    c.documents[i].tokens = {c.documents[i].text};
  }
  const auto units = extract_units(c);
  const double in = accuracy(train_and_predict_insample(c, text_spec()), units);
  const double cv = accuracy(
      train_and_predict_cv(c, text_spec(), make_folds(c, 10, 1)), units);
  EXPECT_GE(in, 0.99);
  EXPECT_LT(cv, 0.65);
}

TEST(InSample, MemorizesNoisyLabels) {
  const Corpus c = inject_noise(small_text(600), 0.05, 2);
  const auto units = extract_units(c);
  const PredictionBundle in = train_and_predict_insample(c, text_spec());
  EXPECT_GE(accuracy(in, units), 0.99);
}

TEST(InSample, RecallBelowCrossValidation) {
  const Corpus c = inject_noise(small_text(600), 0.05, 2);
  const auto units = extract_units(c);
  auto recall = [&](const PredictionBundle& b) {
    int caught = 0, errors = 0;
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (!*units[i].is_error) continue;
      ++errors;
      caught += argmax(b.row(i)) != std::size_t(units[i].noisy_label);
    }
    return double(caught) / errors;
  };
  EXPECT_LT(recall(train_and_predict_insample(c, text_spec())),
            recall(train_and_predict_cv(c, text_spec(), make_folds(c, 10, 1))));
}

TEST(InSample, EmptyDocumentIsUniform) {
  Corpus c = testing::text_corpus({0, 1, 0, 1, 0, 1});
  c.documents[2].text = "";
  c.documents[2].tokens.clear();
  const PredictionBundle b = train_and_predict_insample(c, text_spec());
  EXPECT_NEAR(b.row(2)[0], 0.5, 1e-12);
}

TEST(McDropout, ShapeLimitAndVariance) {
  const Corpus c = small_text(200);
  const FoldAssignment f = make_folds(c, 5, 1);
  const CrossValidatedModel model(c, text_spec(), f);
  const PredictionBundle single = model.predict();
  const PredictionBundle still = model.predict_mc_dropout(10, 0.0, 1);
  EXPECT_EQ(still.kind(), BundleKind::kRepeated);
  EXPECT_EQ(still.depth(), 10u);
  for (std::size_t i = 0; i < still.size(); ++i) {
    for (std::size_t t = 0; t < 10; ++t) {
      EXPECT_NEAR(still.row(i, t)[0], single.row(i)[0], 1e-12);
    }
  }
  const PredictionBundle noisy = model.predict_mc_dropout(10, 0.1, 1);
  expect_stochastic(noisy);
  double var = 0;
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    const double mean = noisy.mean_row(i)[0];
    for (std::size_t t = 0; t < 10; ++t) {
      var += std::pow(noisy.row(i, t)[0] - mean, 2);
    }
  }
  EXPECT_GT(var, 0.0);
  const PredictionBundle again = predict_mc_dropout(c, text_spec(), f, 10, 0.1);
  EXPECT_EQ(again.depth(), 10u);
  EXPECT_THROW(model.predict_mc_dropout(10, 1.0, 1), ConfigError);
}

TEST(EpochRecord, PlainRecordsEveryEpoch) {
  const Corpus c = small_text(150);
  const FoldAssignment f = make_folds(c, 5, 1);
  const EpochRecord r =
      record_epoch_probs(c, text_spec(3), Schedule::kPlain, f);
  EXPECT_EQ(r.bundle.kind(), BundleKind::kPerEpoch);
  EXPECT_EQ(r.bundle.depth(), 3u);
  expect_stochastic(r.bundle);
  const auto units = extract_units(c);
  for (std::size_t u = 0; u < units.size(); ++u) {
    ASSERT_EQ(r.losses[u].size(), 3u);
    for (std::size_t e = 0; e < 3; ++e) {
      EXPECT_NEAR(r.losses[u][e],
                  -std::log(r.bundle.row(u, e)[units[u].noisy_label]), 1e-9);
    }
  }
  // The last epoch is the cross-validated prediction.
  const PredictionBundle cv = train_and_predict_cv(c, text_spec(3), f);
  for (std::size_t u = 0; u < units.size(); ++u) {
    EXPECT_NEAR(r.bundle.row(u, 2)[0], cv.row(u)[0], 1e-12);
  }
}

TEST(EpochRecord, LeitnerKeepsHopelessUnitInFirstDeck) {
  // A featureless document gets a uniform prediction, whose argmax is class
  // 0; labeled 1 it is misclassified in every epoch.
  const Corpus base = small_text(60);
  Corpus c = base;
  c.documents[5].text = "";
  c.documents[5].tokens.clear();
  c.documents[5].annotations[0].label = 1;
  const EpochRecord r =
      record_epoch_probs(c, text_spec(8), Schedule::kLeitner, {});
  ASSERT_EQ(r.decks[5].size(), 8u);
  for (int d : r.decks[5]) EXPECT_EQ(d, 0);
  int promoted = 0;
  for (const auto& trace : r.decks) promoted += trace.back() > 0;
  EXPECT_GT(promoted, 50);
}

TEST(EpochRecord, CurriculumIntroducesHarderUnitsLater) {
  const Corpus c = inject_noise(small_text(300), 0.1, 1);
  const EpochRecord r =
      record_epoch_probs(c, text_spec(10), Schedule::kCurriculum, {});
  ASSERT_EQ(r.introduced_at.size(), 300u);
  for (std::size_t a = 0; a < 300; ++a) {
    EXPECT_GE(r.introduced_at[a], 0);
    for (std::size_t b = 0; b < 300; ++b) {
      if (r.introduced_at[a] < r.introduced_at[b]) {
        EXPECT_LT(r.preliminary_loss[a], r.preliminary_loss[b]);
      }
    }
    EXPECT_EQ(r.losses[a].size(), std::size_t(10 - r.introduced_at[a]));
  }
  EXPECT_EQ(curriculum_deciles(0, 10), 1);
  EXPECT_EQ(curriculum_deciles(9, 10), 10);
  EXPECT_EQ(curriculum_deciles(0, 2), 5);
}

TEST(EpochRecord, ScheduleRestrictions) {
  const Corpus c = small_text(50);
  EXPECT_THROW(record_epoch_probs(c, text_spec(2), Schedule::kLeitner,
                                  make_folds(c, 5, 1)),
               ConfigError);
  SequenceSynthOptions o;
  o.sentences = 20;
  BaselineSpec s;
  s.family = FeatureFamily::kTokenWindow;
  EXPECT_THROW(record_epoch_probs(synth_token_corpus(o), s,
                                  Schedule::kCurriculum, {}),
               ConfigError);
}

TEST(SpanModel, UnitRowsCoverSpans) {
  SequenceSynthOptions o;
  o.sentences = 120;
  const Corpus c = inject_noise(synth_span_corpus(o), 0.05, 1);
  BaselineSpec s;
  s.family = FeatureFamily::kTokenWindow;
  const PredictionBundle b = train_and_predict_cv(c, s, make_folds(c, 5, 1));
  EXPECT_EQ(b.classes(), c.classes);
  EXPECT_EQ(b.size(), extract_units(c).size());
  expect_stochastic(b);
  const TrainingSet set = build_training_set(c, s);
  ASSERT_TRUE(set.tagset.has_value());
  EXPECT_EQ(set.labels.size(), 2 * c.classes.size() + 1);
}

TEST(Projection, EnsembleShapeAndDeterminism) {
  const Corpus c = small_text(200);
  const EmbeddingSet emb = builtin_embed(c, 64, 1);
  const FoldAssignment f = make_folds(c, 5, 1);
  const auto a = gaussian_projection_ensemble(c, emb, 17, 16, &f, text_spec());
  const auto b = gaussian_projection_ensemble(c, emb, 17, 16, &f, text_spec());
  ASSERT_EQ(a.size(), 17u);
  for (std::size_t j = 0; j < 17; ++j) {
    for (std::size_t i = 0; i < a[j].size(); ++i) {
      EXPECT_EQ(a[j].row(i)[0], b[j].row(i)[0]);
    }
  }
  EXPECT_THROW(gaussian_projection_ensemble(c, emb, 3, 65, &f, text_spec()),
               ConfigError);
}

TEST(Projection, FullDimensionKeepsAccuracy) {
  const Corpus c = small_text(400);
  const auto units = extract_units(c);
  const std::size_t d = 64;
  const EmbeddingSet emb = builtin_embed(c, d, 1);
  const FoldAssignment f = make_folds(c, 5, 1);
  // Unprojected reference: the same learner on the raw embeddings.
  std::vector<SparseVector> x(units.size());
  std::vector<int> y(units.size());
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (std::size_t k = 0; k < d; ++k) {
      x[u].index.push_back(static_cast<std::uint32_t>(k));
      x[u].value.push_back(emb.row(u)[k]);
    }
    x[u].index.push_back(static_cast<std::uint32_t>(d));
    x[u].value.push_back(1.0);
    y[u] = units[u].noisy_label;
  }
  std::size_t hit = 0;
  for (int k = 0; k < f.k; ++k) {
    std::vector<std::size_t> train;
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (f.fold_of(units[u].doc_id) != k) train.push_back(u);
    }
    const SoftmaxRegression m =
        fit_softmax(x, y, d + 1, 2, train, text_spec().schedule(k));
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (f.fold_of(units[u].doc_id) != k) continue;
      std::vector<double> p(2);
      m.predict(x[u], p);
      hit += argmax(p) == std::size_t(y[u]);
    }
  }
  const double reference = double(hit) / double(units.size());
  const auto full = gaussian_projection_ensemble(c, emb, 5, d, &f, text_spec());
  for (const auto& m : full) EXPECT_NEAR(accuracy(m, units), reference, 0.05);
}

TEST(BuiltinEmbed, UnitNormAndDuplicates) {
  Corpus c = small_text(100);
  c.documents[7].text = c.documents[3].text;
  c.documents[7].tokens = c.documents[3].tokens;
  const EmbeddingSet e = builtin_embed(c, 64, 5);
  ASSERT_EQ(e.uids.size(), 100u);
  for (std::size_t i = 0; i < 100; ++i) {
    double n = 0;
    for (double v : e.row(i)) n += v * v;
    EXPECT_NEAR(n, 1.0, 1e-9);
  }
  EXPECT_EQ(std::vector<double>(e.row(3).begin(), e.row(3).end()),
            std::vector<double>(e.row(7).begin(), e.row(7).end()));
  double best = 1e9;
  std::size_t nearest = 0;
  for (std::size_t j = 0; j < 100; ++j) {
    if (j == 3) continue;
    double d = 0;
    for (std::size_t k = 0; k < 64; ++k) d += std::pow(e.row(3)[k] - e.row(j)[k], 2);
    if (d < best) {
      best = d;
      nearest = j;
    }
  }
  EXPECT_EQ(nearest, 7u);
}

ResponseMatrix matrix(const std::vector<std::vector<int>>& rows) {
  ResponseMatrix r;
  r.subjects = rows.size();
  r.items = rows[0].size();
  for (const auto& row : rows) {
    for (int v : row) r.data.push_back(static_cast<std::uint8_t>(v));
  }
  return r;
}

TEST(Irt, DiscriminationSigns) {
  // Subjects sorted from strongest to weakest; item 5 is answered only by
  // the two weakest, item 6 by everyone.
  const ResponseMatrix r = matrix({{1, 1, 1, 1, 1, 0, 1},
                                   {1, 1, 1, 1, 0, 0, 1},
                                   {1, 1, 1, 0, 0, 0, 1},
                                   {1, 1, 0, 0, 0, 0, 1},
                                   {1, 0, 0, 0, 0, 1, 1},
                                   {0, 0, 0, 0, 0, 1, 1}});
  const IrtFit fit = fit_irt_2pl(r);
  EXPECT_LT(fit.a[5], 0.0);
  EXPECT_GE(fit.a[6], 0.0);
  EXPECT_GT(fit.theta[0], fit.theta[5]);
  EXPECT_FALSE(fit.degenerate);
  std::vector<double> theta(fit.theta.begin(), fit.theta.end());
  std::vector<int> y5;
  for (std::size_t s = 0; s < 6; ++s) y5.push_back(r.at(s, 5));
  EXPECT_LT(oracle::logistic_slope(theta, y5), 0.0);
}

TEST(Irt, IdenticalSubjectsShareAbility) {
  const ResponseMatrix r = matrix({{1, 0, 1, 1, 0},
                                   {1, 0, 1, 1, 0},
                                   {0, 0, 1, 0, 1},
                                   {1, 1, 1, 0, 0}});
  const IrtFit fit = fit_irt_2pl(r);
  EXPECT_LT(std::abs(fit.theta[0] - fit.theta[1]), 1e-3);
}

TEST(Irt, SignFlipLeavesLikelihoodAndKeepsMeanPositive) {
  std::mt19937_64 rng(3);
  ResponseMatrix r;
  r.subjects = 6;
  r.items = 30;
  for (std::size_t i = 0; i < 180; ++i) r.data.push_back(rng() % 3 != 0);
  IrtFit fit = fit_irt_2pl(r);
  double mean_a = 0;
  for (double a : fit.a) mean_a += a;
  EXPECT_GE(mean_a, 0.0);
  IrtFit neg = fit;
  for (double& t : neg.theta) t = -t;
  for (double& a : neg.a) a = -a;
  for (double& b : neg.b) b = -b;
  // The likelihood term is symmetric; only the a ~ N(1, 1) prior differs.
  double prior_gap = 0;
  for (double a : fit.a) prior_gap += 0.5 * (std::pow(-a - 1, 2) - std::pow(a - 1, 2));
  EXPECT_NEAR(fit.log_posterior(r) - neg.log_posterior(r), prior_gap, 1e-9);
}

TEST(Irt, ItemSignsMatchPerItemPosteriorMode) {
  std::mt19937_64 rng(8);
  for (int m = 0; m < 5; ++m) {
    ResponseMatrix r;
    r.subjects = 6;
    r.items = 15;
    for (std::size_t k = 0; k < 90; ++k) r.data.push_back(rng() % 2);
    const IrtFit fit = fit_irt_2pl(r);
    for (std::size_t i = 0; i < r.items; ++i) {
      std::vector<int> y;
      for (std::size_t s = 0; s < r.subjects; ++s) y.push_back(r.at(s, i));
      EXPECT_EQ(oracle::item_discrimination(fit.theta, y) < 0, fit.a[i] < 0)
          << "matrix " << m << " item " << i;
    }
  }
}

TEST(Irt, DegenerateMatrix) {
  const IrtFit fit = fit_irt_2pl(matrix({{1, 1}, {1, 1}, {1, 1}}));
  EXPECT_TRUE(fit.degenerate);
  for (double a : fit.a) EXPECT_GE(a, 0.0);
}

}  // namespace
}  // namespace aed
