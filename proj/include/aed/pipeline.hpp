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

#ifndef AED_PIPELINE_HPP_
#define AED_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aed/corpus.hpp"
#include "aed/detect.hpp"
#include "aed/features.hpp"
#include "aed/span_align.hpp"

namespace aed {

struct RunConfig {
  Task task = Task::kText;
  std::filesystem::path input;
  std::filesystem::path out = "aed-out";
  // Label of the corpus in reports; defaults to the input file stem.
  std::string dataset;
  // Empty means every method that applies to the task.
  std::vector<Method> methods;
  // The first family is the primary model; all of them form the diverse
  // ensemble. Empty means the task's three built-in families.
  std::vector<FeatureFamily> models;
  int folds = 10;
  std::uint64_t seed = 0;
  // Flipped label noise injected by the corrupt stage; 0 skips it.
  double rate = 0.0;
  bool calibrate = false;
  bool cross_validate = true;
  std::filesystem::path predictions;
  std::filesystem::path embeddings;

  int epochs = 20;
  double learning_rate = 1.0;
  double l2 = 1e-5;
  int hash_bits = 16;
  Aggregation aggregation = Aggregation::kMean;
  int dropout_passes = 10;
  double dropout_rate = 0.1;
  int projection_members = 17;
  std::size_t projection_dim = 32;
  std::size_t embed_dim = 256;
  std::size_t knn_k = 10;
  bool knn_include_self = true;
  // Empty means the task default.
  std::vector<Method> borda;
  std::size_t borda_top = 3;

  // Throws ConfigError, before any computation, for methods or models that
  // do not fit the task and for out-of-range settings.
  void validate() const;

  std::vector<Method> effective_methods() const;
  std::vector<FeatureFamily> effective_models() const;
  std::vector<Method> effective_borda() const;
  std::string effective_dataset() const;

  // key = value lines, one per field, in a fixed order.
  std::string to_text() const;
  static RunConfig from_text(const std::string& text);
  // Applies one key = value assignment.
  void set(const std::string& key, const std::string& value);
};

RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

std::vector<Method> default_borda_members(Task task);

enum class Stage { kIngest, kCorrupt, kTrain, kCalibrate, kDetect, kEvaluate,
                   kReport };

std::string_view stage_name(Stage stage);
std::vector<Stage> all_stages();

// Stage outputs live under config.out. A stage whose configuration and
// inputs hash to the value stamped by its last run is skipped unless forced.
class Pipeline {
 public:
  Pipeline(RunConfig config, std::ostream& log, bool force = false);

  // Returns false if the stage was skipped as up to date.
  bool run(Stage stage);
  void run_all();

  const RunConfig& config() const { return config_; }

  std::filesystem::path clean_corpus_path() const;
  // The noisy corpus when noise is injected, the clean corpus otherwise.
  std::filesystem::path working_corpus_path() const;
  std::filesystem::path folds_path() const;
  std::filesystem::path report_tsv_path() const;
  std::filesystem::path report_json_path() const;

 private:
  std::vector<std::filesystem::path> stage_inputs(Stage stage) const;
  std::string stage_key(Stage stage) const;
  void ingest();
  void corrupt();
  void train();
  void calibrate();
  void detect();
  void evaluate();
  void report();

  RunConfig config_;
  std::ostream& log_;
  bool force_;
};

// Per-unit variable-length traces of a training schedule (losses or decks).
void write_trace(const std::vector<std::string>& uids,
                 const std::vector<std::vector<double>>& rows,
                 const std::string& kind, const std::filesystem::path& path);
std::vector<std::vector<double>> read_trace(const std::filesystem::path& path,
                                            std::span<const Unit> units,
                                            const std::string& kind);

}  // namespace aed

#endif  // AED_PIPELINE_HPP_
