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

#ifndef AED_IO_HPP_
#define AED_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "aed/corpus.hpp"

namespace aed {

enum class BundleKind { kSingle, kRepeated, kPerEpoch };

// Class probabilities for every unit of a corpus, aligned to unit order.
// Each unit owns `depth` rows (1 for Single, T passes for Repeated, E epochs
// for PerEpoch) of `classes.size()` probabilities.
class PredictionBundle {
 public:
  PredictionBundle() = default;
  PredictionBundle(std::string model_name, std::vector<std::string> classes,
                   BundleKind kind, std::size_t depth,
                   std::vector<std::string> uids);

  const std::string& model_name() const { return model_name_; }
  const std::vector<std::string>& classes() const { return classes_; }
  BundleKind kind() const { return kind_; }
  std::size_t depth() const { return depth_; }
  std::size_t num_classes() const { return classes_.size(); }
  std::size_t size() const { return uids_.size(); }
  const std::vector<std::string>& uids() const { return uids_; }

  std::span<double> row(std::size_t unit, std::size_t pass = 0);
  std::span<const double> row(std::size_t unit, std::size_t pass = 0) const;
  // Mean over passes/epochs.
  std::vector<double> mean_row(std::size_t unit) const;

  void set_model_name(std::string name) { model_name_ = std::move(name); }

  // Throws DataError unless every row sums to 1 within `tolerance` and all
  // entries are finite and non-negative.
  void check_stochastic(double tolerance) const;

 private:
  std::string model_name_;
  std::vector<std::string> classes_;
  BundleKind kind_ = BundleKind::kSingle;
  std::size_t depth_ = 1;
  std::vector<std::string> uids_;
  std::vector<double> data_;
};

// Verifies that `bundle` lists exactly the uids of `units`, in order.
void check_covers(const PredictionBundle& bundle, std::span<const Unit> units);

struct EmbeddingSet {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::string> uids;
  // uids.size() x dim, row-major.
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * dim, dim};
  }
  std::span<double> row(std::size_t i) { return {data.data() + i * dim, dim}; }
};

// ---------------------------------------------------------------------------
// Corpora

// JSON lines: {"id": ..., "text": ..., "label": ..., "gold_label": ...}.
Corpus read_text_corpus(const std::filesystem::path& path);
// token<TAB>tag[<TAB>gold_tag], blank line between sentences, optional
// "# id = <doc id>" line before a sentence.
Corpus read_column_corpus(const std::filesystem::path& path, Task task);
// Dispatches on corpus.task.
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus read_corpus(const std::filesystem::path& path, Task task);

// Number of I-X tags repaired into B-X by the last read_column_corpus call on
// this thread.
int last_bio_repairs();

// ---------------------------------------------------------------------------
// Interchange

PredictionBundle read_predictions(const std::filesystem::path& path,
                                  const Corpus& corpus);
void write_predictions(const PredictionBundle& bundle,
                       const std::filesystem::path& path);

EmbeddingSet read_embeddings(const std::filesystem::path& path,
                             const Corpus& corpus);
void write_embeddings(const EmbeddingSet& embeddings,
                      const std::filesystem::path& path);

void write_folds(const FoldAssignment& folds,
                 const std::filesystem::path& path);
FoldAssignment read_folds(const std::filesystem::path& path);

// Formats a double with enough digits to round-trip exactly.
std::string format_double(double value);

}  // namespace aed

#endif  // AED_IO_HPP_
