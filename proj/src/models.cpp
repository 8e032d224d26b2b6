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

#include "aed/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include "aed/error.hpp"
#include "aed/kernels.hpp"

namespace aed {

void BaselineSpec::validate(Task task) const {
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (hash_bits < 12 || hash_bits > 24) {
    throw ConfigError("hash bits must lie in [12, 24]");
  }
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be > 0");
  if (!(l2 >= 0.0)) throw ConfigError("l2 weight must be >= 0");
  if ((task == Task::kText) != is_text_family(family)) {
    throw ConfigError("model family " + name() + " does not fit a " +
                      std::string(task_name(task)) + " corpus");
  }
}

SgdSchedule BaselineSpec::schedule(std::uint64_t salt) const {
  return SgdSchedule{epochs, learning_rate, l2, mix_seed(seed, salt)};
}

std::vector<FeatureFamily> default_families(Task task) {
  if (task == Task::kText) {
    return {FeatureFamily::kTextBow, FeatureFamily::kTextCharNgram,
            FeatureFamily::kTextTfidf};
  }
  return {FeatureFamily::kTokenWindow, FeatureFamily::kTokenSuffix,
          FeatureFamily::kTokenChar};
}

namespace {

std::vector<std::size_t> sorted_doc_order(const Corpus& corpus) {
  std::vector<std::size_t> order(corpus.documents.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus.documents[a].id < corpus.documents[b].id;
  });
  return order;
}

std::vector<std::string> unit_uids(std::span<const Unit> units) {
  std::vector<std::string> out;
  out.reserve(units.size());
  for (const Unit& u : units) out.push_back(u.uid);
  return out;
}

double label_loss(std::span<const double> row, int label) {
  return -std::log(std::max(row[std::size_t(label)], 1e-12));
}

std::size_t argmax(std::span<const double> row) {
  return static_cast<std::size_t>(
      std::max_element(row.begin(), row.end()) - row.begin());
}

// Trains one model per fold, in parallel; model f never sees fold f.
std::vector<SoftmaxRegression> fit_folds(std::span<const SparseVector> x,
                                         std::span<const int> y,
                                         std::span<const int> fold, int k,
                                         std::size_t dim, std::size_t classes,
                                         const BaselineSpec& spec) {
  std::vector<SoftmaxRegression> models(std::size_t(k),
                                        SoftmaxRegression(dim, classes));
#pragma omp parallel for schedule(dynamic)
  for (int f = 0; f < k; ++f) {
    std::vector<std::size_t> train;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (fold[i] != f) train.push_back(i);
    }
    models[std::size_t(f)] =
        fit_softmax(x, y, dim, classes, train, spec.schedule(std::uint64_t(f)));
  }
  return models;
}

void check_class_support(std::span<const Unit> units,
                         const std::vector<std::string>& classes) {
  std::vector<bool> seen(classes.size(), false);
  for (const Unit& u : units) seen[std::size_t(u.noisy_label)] = true;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (!seen[c]) {
      throw DataError("class '" + classes[c] +
                      "' has no training instance in any fold");
    }
  }
}

}  // namespace

TrainingSet build_training_set(const Corpus& corpus,
                               const BaselineSpec& spec) {
  spec.validate(corpus.task);
  TrainingSet set;
  set.dim = hashed_dim(spec.hash_bits);
  set.doc_offset.assign(corpus.documents.size(), 0);
  std::vector<std::vector<std::string>> features;

  if (corpus.task == Task::kSpan) {
    set.tagset = BioTagset::from_types(corpus.classes);
    set.labels = set.tagset->tags();
  } else {
    set.labels = corpus.classes;
  }

  for (std::size_t d : sorted_doc_order(corpus)) {
    const Document& doc = corpus.documents[d];
    set.doc_offset[d] = features.size();
    switch (corpus.task) {
      case Task::kText:
        features.push_back(text_features(spec.family, doc.tokens));
        set.y.push_back(doc.annotations.at(0).label);
        set.doc.push_back(d);
        break;
      case Task::kToken: {
        std::vector<int> tags(doc.tokens.size(), 0);
        for (const Annotation& a : doc.annotations) {
          tags[std::size_t(a.begin)] = a.label;
        }
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
          features.push_back(token_features(spec.family, doc.tokens, i));
          set.y.push_back(tags[i]);
          set.doc.push_back(d);
        }
        break;
      }
      case Task::kSpan: {
        const BioTagset& ts = *set.tagset;
        std::vector<int> tags(doc.tokens.size(), int(ts.outside_index()));
        for (const Annotation& a : doc.annotations) {
          const auto t = std::size_t(a.label);
          tags[std::size_t(a.begin)] = int(ts.begin_index(t));
          for (int i = a.begin + 1; i < a.end; ++i) {
            tags[std::size_t(i)] = int(ts.inside_index(t));
          }
        }
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
          features.push_back(token_features(spec.family, doc.tokens, i));
          set.y.push_back(tags[i]);
          set.doc.push_back(d);
        }
        break;
      }
    }
  }

  std::vector<double> idf;
  if (spec.family == FeatureFamily::kTextTfidf) {
    const std::size_t buckets = std::size_t{1} << spec.hash_bits;
    const std::uint64_t mask = buckets - 1;
    std::vector<double> df(buckets, 0.0);
    for (const auto& f : features) {
      std::vector<std::uint32_t> seen;
      for (const std::string& s : f) {
        seen.push_back(static_cast<std::uint32_t>(fnv1a(s) & mask));
      }
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      for (std::uint32_t b : seen) df[b] += 1.0;
    }
    const double n = static_cast<double>(features.size());
    idf.resize(buckets);
    for (std::size_t b = 0; b < buckets; ++b) {
      idf[b] = std::log((1.0 + n) / (1.0 + df[b])) + 1.0;
    }
  }
  set.x.resize(features.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < features.size(); ++i) {
    set.x[i] = hash_features(features[i], spec.hash_bits, idf);
  }
  return set;
}

std::vector<ProbRow> unit_rows(const TrainingSet& set,
                               std::span<const double> instance_probs,
                               std::span<const Unit> units,
                               std::size_t num_classes,
                               Aggregation aggregation) {
  const std::size_t L = set.labels.size();
  std::vector<ProbRow> rows(units.size());
  for (std::size_t u = 0; u < units.size(); ++u) {
    const Unit& unit = units[u];
    const std::size_t first = set.doc_offset[unit.doc_index];
    if (!set.tagset) {
      const std::size_t inst = first + std::size_t(unit.begin);
      rows[u].assign(instance_probs.begin() + std::ptrdiff_t(inst * L),
                     instance_probs.begin() + std::ptrdiff_t((inst + 1) * L));
      continue;
    }
    std::vector<ProbRow> token_rows;
    for (int t = unit.begin; t < unit.end; ++t) {
      const std::size_t inst = first + std::size_t(t);
      token_rows.emplace_back(
          instance_probs.begin() + std::ptrdiff_t(inst * L),
          instance_probs.begin() + std::ptrdiff_t((inst + 1) * L));
    }
    ProbRow full = span_label_distribution(token_rows, *set.tagset, aggregation);
    full.resize(num_classes);
    const double total = std::accumulate(full.begin(), full.end(), 0.0);
    for (double& p : full) {
      p = total > 0.0 ? p / total : 1.0 / static_cast<double>(num_classes);
    }
    rows[u] = std::move(full);
  }
  return rows;
}

// ---------------------------------------------------------------------------

CrossValidatedModel::CrossValidatedModel(const Corpus& corpus,
                                         const BaselineSpec& spec,
                                         const FoldAssignment& folds)
    : corpus_(&corpus), spec_(spec), units_(extract_units(corpus)) {
  check_class_support(units_, corpus.classes);
  set_ = build_training_set(corpus, spec);
  instance_fold_.resize(set_.x.size());
  for (std::size_t i = 0; i < set_.x.size(); ++i) {
    instance_fold_[i] = folds.fold_of(corpus.documents[set_.doc[i]].id);
  }
  models_ = fit_folds(set_.x, set_.y, instance_fold_, folds.k, set_.dim,
                      set_.labels.size(), spec_);
}

CrossValidatedModel::CrossValidatedModel(const Corpus& corpus,
                                         const BaselineSpec& spec)
    : corpus_(&corpus), spec_(spec), units_(extract_units(corpus)) {
  check_class_support(units_, corpus.classes);
  set_ = build_training_set(corpus, spec);
  instance_fold_.assign(set_.x.size(), 0);
  std::vector<std::size_t> all(set_.x.size());
  std::iota(all.begin(), all.end(), 0);
  models_.push_back(fit_softmax(set_.x, set_.y, set_.dim, set_.labels.size(),
                                all, spec_.schedule()));
}

PredictionBundle CrossValidatedModel::to_bundle(
    const std::vector<double>& instance_probs, std::size_t depth,
    BundleKind kind) const {
  const std::size_t L = set_.labels.size();
  const std::size_t n = set_.x.size();
  const std::size_t C = corpus_->classes.size();
  PredictionBundle bundle(spec_.name(), corpus_->classes, kind, depth,
                          unit_uids(units_));
  for (std::size_t t = 0; t < depth; ++t) {
    std::span<const double> pass(instance_probs.data() + t * n * L, n * L);
    const std::vector<ProbRow> rows =
        unit_rows(set_, pass, units_, C, spec_.aggregation);
    for (std::size_t u = 0; u < rows.size(); ++u) {
      std::copy(rows[u].begin(), rows[u].end(), bundle.row(u, t).begin());
    }
  }
  return bundle;
}

PredictionBundle CrossValidatedModel::predict() const {
  const std::size_t L = set_.labels.size();
  std::vector<double> probs(set_.x.size() * L);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < set_.x.size(); ++i) {
    models_[std::size_t(instance_fold_[i])].predict(
        set_.x[i], std::span<double>(probs.data() + i * L, L));
  }
  return to_bundle(probs, 1, BundleKind::kSingle);
}

PredictionBundle CrossValidatedModel::predict_mc_dropout(
    int passes, double drop_rate, std::uint64_t seed) const {
  if (passes < 2) throw ConfigError("dropout needs at least 2 passes");
  if (!(drop_rate >= 0.0 && drop_rate < 1.0)) {
    throw ConfigError("dropout rate must lie in [0, 1)");
  }
  const std::size_t L = set_.labels.size();
  const std::size_t n = set_.x.size();
  const auto bias = static_cast<std::uint32_t>(set_.dim - 1);
  const double keep_scale = 1.0 / (1.0 - drop_rate);
  std::vector<double> probs(std::size_t(passes) * n * L);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const SparseVector& x = set_.x[i];
    std::vector<double> mask(x.nnz());
    std::mt19937_64 rng(mix_seed(seed, i));
    std::bernoulli_distribution drop(drop_rate);
    for (int t = 0; t < passes; ++t) {
      for (std::size_t k = 0; k < x.nnz(); ++k) {
        mask[k] = x.index[k] == bias ? 1.0 : drop(rng) ? 0.0 : keep_scale;
      }
      models_[std::size_t(instance_fold_[i])].predict(
          x, std::span<double>(probs.data() + (std::size_t(t) * n + i) * L, L),
          mask);
    }
  }
  return to_bundle(probs, std::size_t(passes), BundleKind::kRepeated);
}

PredictionBundle train_and_predict_cv(const Corpus& corpus,
                                      const BaselineSpec& spec,
                                      const FoldAssignment& folds) {
  return CrossValidatedModel(corpus, spec, folds).predict();
}

PredictionBundle train_and_predict_insample(const Corpus& corpus,
                                            const BaselineSpec& spec) {
  return CrossValidatedModel(corpus, spec).predict();
}

PredictionBundle predict_mc_dropout(const Corpus& corpus,
                                    const BaselineSpec& spec,
                                    const FoldAssignment& folds, int passes,
                                    double drop_rate) {
  return CrossValidatedModel(corpus, spec, folds)
      .predict_mc_dropout(passes, drop_rate, mix_seed(spec.seed, 0xD50));
}

// ---------------------------------------------------------------------------
// Training dynamics

int curriculum_deciles(int epoch, int epochs) {
  const int d = (10 * (epoch + 1) + epochs - 1) / epochs;
  return std::min(10, d);
}

namespace {

void record_epoch(const TrainingSet& set, std::span<const Unit> units,
                  std::size_t num_classes, Aggregation aggregation,
                  const std::vector<double>& probs, std::size_t epoch,
                  PredictionBundle& bundle) {
  const std::vector<ProbRow> rows =
      unit_rows(set, probs, units, num_classes, aggregation);
  for (std::size_t u = 0; u < rows.size(); ++u) {
    std::copy(rows[u].begin(), rows[u].end(), bundle.row(u, epoch).begin());
  }
}

}  // namespace

EpochRecord record_epoch_probs(const Corpus& corpus, const BaselineSpec& spec,
                               Schedule schedule,
                               const std::optional<FoldAssignment>& folds) {
  if (schedule != Schedule::kPlain && corpus.task != Task::kText) {
    throw ConfigError(
        "curriculum and leitner schedules apply to text classification only");
  }
  if (schedule != Schedule::kPlain && folds) {
    throw ConfigError(
        "curriculum and leitner schedules train on the full corpus");
  }
  const std::vector<Unit> units = extract_units(corpus);
  check_class_support(units, corpus.classes);
  const TrainingSet set = build_training_set(corpus, spec);
  const std::size_t n = set.x.size();
  const std::size_t L = set.labels.size();
  const std::size_t C = corpus.classes.size();
  const auto E = static_cast<std::size_t>(spec.epochs);

  EpochRecord rec;
  rec.bundle = PredictionBundle(spec.name(), corpus.classes,
                                BundleKind::kPerEpoch, E, unit_uids(units));
  rec.losses.assign(units.size(), {});

  auto append_losses = [&](std::size_t e, const std::vector<bool>* trained) {
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (trained && !(*trained)[u]) continue;
      rec.losses[u].push_back(
          label_loss(rec.bundle.row(u, e), units[u].noisy_label));
    }
  };

  if (schedule == Schedule::kPlain) {
    const SgdSchedule sched = spec.schedule();
    if (!folds) {
      SoftmaxRegression model(set.dim, L);
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::mt19937_64 rng(sched.seed);
      for (std::size_t e = 0; e < E; ++e) {
        std::shuffle(order.begin(), order.end(), rng);
        model.sgd_epoch(set.x, set.y, order, sched.rate(int(e)), sched.l2);
        record_epoch(set, units, C, spec.aggregation, model.predict_batch(set.x),
                     e, rec.bundle);
        append_losses(e, nullptr);
      }
      return rec;
    }
    std::vector<int> fold(n);
    for (std::size_t i = 0; i < n; ++i) {
      fold[i] = folds->fold_of(corpus.documents[set.doc[i]].id);
    }
    // probs[e] holds every instance's holdout row after epoch e.
    std::vector<std::vector<double>> probs(E, std::vector<double>(n * L));
#pragma omp parallel for schedule(dynamic)
    for (int f = 0; f < folds->k; ++f) {
      const SgdSchedule fs = spec.schedule(std::uint64_t(f));
      SoftmaxRegression model(set.dim, L);
      std::vector<std::size_t> train, held;
      for (std::size_t i = 0; i < n; ++i) {
        (fold[i] == f ? held : train).push_back(i);
      }
      std::mt19937_64 rng(fs.seed);
      for (std::size_t e = 0; e < E; ++e) {
        std::shuffle(train.begin(), train.end(), rng);
        model.sgd_epoch(set.x, set.y, train, fs.rate(int(e)), fs.l2);
        for (std::size_t i : held) {
          model.predict(set.x[i], std::span<double>(probs[e].data() + i * L, L));
        }
      }
    }
    for (std::size_t e = 0; e < E; ++e) {
      record_epoch(set, units, C, spec.aggregation, probs[e], e, rec.bundle);
      append_losses(e, nullptr);
    }
    return rec;
  }

  // Text classification from here on: instance i is unit i.
  const SgdSchedule sched = spec.schedule();
  std::mt19937_64 rng(sched.seed);

  if (schedule == Schedule::kCurriculum) {
    SoftmaxRegression prelim(set.dim, L);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 prelim_rng(mix_seed(sched.seed, 0xC0));
    std::shuffle(order.begin(), order.end(), prelim_rng);
    prelim.sgd_epoch(set.x, set.y, order, sched.rate(0), sched.l2);
    const std::vector<double> p0 = prelim.predict_batch(set.x);
    rec.preliminary_loss.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      rec.preliminary_loss[i] =
          label_loss(std::span<const double>(p0.data() + i * L, L), set.y[i]);
    }
    std::vector<std::size_t> by_loss(n);
    std::iota(by_loss.begin(), by_loss.end(), 0);
    std::stable_sort(by_loss.begin(), by_loss.end(),
                     [&](std::size_t a, std::size_t b) {
                       return rec.preliminary_loss[a] < rec.preliminary_loss[b];
                     });
    std::vector<int> decile(n);
    for (std::size_t r = 0; r < n; ++r) {
      decile[by_loss[r]] = static_cast<int>(r * 10 / n);
    }
    rec.introduced_at.assign(n, -1);
    SoftmaxRegression model(set.dim, L);
    for (std::size_t e = 0; e < E; ++e) {
      const int open = curriculum_deciles(int(e), spec.epochs);
      std::vector<std::size_t> train;
      std::vector<bool> included(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        if (decile[i] < open) {
          train.push_back(i);
          included[i] = true;
          if (rec.introduced_at[i] < 0) rec.introduced_at[i] = int(e);
        }
      }
      std::shuffle(train.begin(), train.end(), rng);
      model.sgd_epoch(set.x, set.y, train, sched.rate(int(e)), sched.l2);
      record_epoch(set, units, C, spec.aggregation, model.predict_batch(set.x),
                   e, rec.bundle);
      append_losses(e, &included);
    }
    return rec;
  }

  // Leitner: deck q is reviewed in epochs e with e % 2^q == 0.
  std::vector<int> deck(n, 0);
  rec.decks.assign(n, {});
  SoftmaxRegression model(set.dim, L);
  for (std::size_t e = 0; e < E; ++e) {
    std::vector<std::size_t> train;
    std::vector<bool> reviewed(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      rec.decks[i].push_back(deck[i]);
      if (e % (std::size_t{1} << deck[i]) == 0) {
        train.push_back(i);
        reviewed[i] = true;
      }
    }
    std::shuffle(train.begin(), train.end(), rng);
    model.sgd_epoch(set.x, set.y, train, sched.rate(int(e)), sched.l2);
    const std::vector<double> probs = model.predict_batch(set.x);
    record_epoch(set, units, C, spec.aggregation, probs, e, rec.bundle);
    append_losses(e, &reviewed);
    for (std::size_t i = 0; i < n; ++i) {
      if (!reviewed[i]) continue;
      const auto pred = argmax(std::span<const double>(probs.data() + i * L, L));
      deck[i] = pred == std::size_t(set.y[i])
                    ? std::min(deck[i] + 1, kLeitnerDecks - 1)
                    : 0;
    }
  }
  return rec;
}

// ---------------------------------------------------------------------------
// Embedding-based models

std::vector<PredictionBundle> gaussian_projection_ensemble(
    const Corpus& corpus, const EmbeddingSet& embeddings, int members,
    std::size_t projected_dim, const FoldAssignment* folds,
    const BaselineSpec& spec) {
  if (members < 1) throw ConfigError("projection ensemble needs members");
  if (projected_dim == 0 || projected_dim > embeddings.dim) {
    throw ConfigError("projected dimension must lie in [1, " +
                      std::to_string(embeddings.dim) + "]");
  }
  const std::vector<Unit> units = extract_units(corpus);
  check_class_support(units, corpus.classes);
  if (embeddings.uids != unit_uids(units)) {
    throw DataError("embeddings '" + embeddings.name +
                    "' do not follow the corpus unit order");
  }
  const std::size_t n = units.size();
  const std::size_t d = embeddings.dim;
  const std::size_t p = projected_dim;
  const std::size_t C = corpus.classes.size();
  std::vector<int> y(n), fold(n);
  for (std::size_t u = 0; u < n; ++u) {
    y[u] = units[u].noisy_label;
    fold[u] = folds ? folds->fold_of(units[u].doc_id) : 0;
  }
  const MatrixView points{embeddings.data.data(), n, d};

  std::vector<PredictionBundle> out;
  for (int j = 0; j < members; ++j) {
    std::mt19937_64 rng(mix_seed(spec.seed, 0x9A0000 + std::uint64_t(j)));
    std::normal_distribution<double> gauss(0.0,
                                           1.0 / std::sqrt(double(p)));
    std::vector<double> proj(d * p);
    for (double& v : proj) v = gauss(rng);
    const std::vector<double> z =
        kernels::parallel::project(points, MatrixView{proj.data(), d, p});
    std::vector<SparseVector> x(n);
    for (std::size_t u = 0; u < n; ++u) {
      double norm = 0.0;
      for (std::size_t k = 0; k < p; ++k) norm += z[u * p + k] * z[u * p + k];
      norm = norm > 0.0 ? std::sqrt(norm) : 1.0;
      x[u].index.resize(p + 1);
      x[u].value.resize(p + 1);
      for (std::size_t k = 0; k < p; ++k) {
        x[u].index[k] = static_cast<std::uint32_t>(k);
        x[u].value[k] = z[u * p + k] / norm;
      }
      x[u].index[p] = static_cast<std::uint32_t>(p);
      x[u].value[p] = 1.0;
    }
    BaselineSpec member = spec;
    member.seed = mix_seed(spec.seed, std::uint64_t(j));
    std::vector<SoftmaxRegression> models;
    if (folds) {
      models = fit_folds(x, y, fold, folds->k, p + 1, C, member);
    } else {
      std::vector<std::size_t> all(n);
      std::iota(all.begin(), all.end(), 0);
      models.push_back(
          fit_softmax(x, y, p + 1, C, all, member.schedule()));
    }
    PredictionBundle bundle("gpe-" + std::to_string(j), corpus.classes,
                            BundleKind::kSingle, 1, unit_uids(units));
    for (std::size_t u = 0; u < n; ++u) {
      models[std::size_t(fold[u])].predict(x[u], bundle.row(u));
    }
    out.push_back(std::move(bundle));
  }
  return out;
}

namespace {

// Weighted feature strings describing one unit.
std::map<std::string, double> unit_terms(const Document& doc, const Unit& u) {
  std::map<std::string, double> terms;
  auto add_word = [&](const std::string& token, const std::string& tag,
                      double w) {
    const std::string word = lowercase(token);
    terms[tag + "w=" + word] += w;
    const std::string padded = "<" + word + ">";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
      terms[tag + "c=" + padded.substr(i, 3)] += 0.5 * w;
    }
  };
  auto context = [&](int i) -> std::string {
    if (i < 0) return "<s>";
    if (i >= static_cast<int>(doc.tokens.size())) return "</s>";
    return doc.tokens[std::size_t(i)];
  };
  if (u.kind == UnitKind::kText) {
    for (const std::string& t : doc.tokens) add_word(t, "", 1.0);
    return terms;
  }
  for (int i = u.begin; i < u.end; ++i) {
    add_word(doc.tokens[std::size_t(i)], "", 1.0);
  }
  const int window = u.kind == UnitKind::kToken ? 2 : 1;
  for (int k = 1; k <= window; ++k) {
    terms["l" + std::to_string(k) + "=" + lowercase(context(u.begin - k))] +=
        0.5;
    terms["r" + std::to_string(k) + "=" + lowercase(context(u.end - 1 + k))] +=
        0.5;
  }
  return terms;
}

}  // namespace

EmbeddingSet builtin_embed(const Corpus& corpus, std::size_t dim,
                           std::uint64_t seed) {
  if (dim == 0) throw ConfigError("embedding dimension must be positive");
  const std::vector<Unit> units = extract_units(corpus);
  const std::size_t n = units.size();
  std::vector<std::map<std::string, double>> terms(n);
  std::unordered_map<std::string, double> df;
  for (std::size_t u = 0; u < n; ++u) {
    terms[u] = unit_terms(corpus.documents[units[u].doc_index], units[u]);
    for (const auto& kv : terms[u]) df[kv.first] += 1.0;
  }
  // One Gaussian direction per distinct term.
  std::unordered_map<std::string, std::vector<double>> direction;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const auto& kv : df) {
    std::mt19937_64 rng(fnv1a(kv.first, seed));
    std::vector<double> v(dim);
    for (double& x : v) x = gauss(rng);
    gauss.reset();
    direction.emplace(kv.first, std::move(v));
  }

  EmbeddingSet out;
  out.name = "builtin-tfidf";
  out.dim = dim;
  out.uids = unit_uids(units);
  out.data.assign(n * dim, 0.0);
  const double N = static_cast<double>(n);
#pragma omp parallel for schedule(static)
  for (std::size_t u = 0; u < n; ++u) {
    std::span<double> row = out.row(u);
    for (const auto& [term, tf] : terms[u]) {
      const double w = tf * (std::log((1.0 + N) / (1.0 + df.at(term))) + 1.0);
      const std::vector<double>& g = direction.at(term);
      for (std::size_t k = 0; k < dim; ++k) row[k] += w * g[k];
    }
    double norm = 0.0;
    for (double x : row) norm += x * x;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (double& x : row) x /= norm;
    } else {
      row[0] = 1.0;
    }
  }
  return out;
}

}  // namespace aed
