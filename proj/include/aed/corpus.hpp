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

#ifndef AED_CORPUS_HPP_
#define AED_CORPUS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aed {

enum class Task { kText, kToken, kSpan };

std::string_view task_name(Task task);
// Accepts "text", "token" and "span".
Task parse_task(std::string_view name);

enum class UnitKind { kText, kToken, kSpan };

// One labeled item inside a document. For text classification there is a
// single annotation covering the document (begin = end = 0), for token
// labeling one annotation per token (end = begin + 1), for span labeling one
// annotation per labeled span with token offsets [begin, end).
struct Annotation {
  int begin = 0;
  int end = 0;
  int label = 0;
  std::optional<int> gold_label;
  std::optional<bool> is_error;

  bool operator==(const Annotation&) const = default;
};

struct Document {
  std::string id;
  std::vector<std::string> tokens;
  // Raw text; only meaningful for text classification.
  std::string text;
  std::vector<Annotation> annotations;
  // Span labeling only: reference (gold) spans, when known. Their `label` is
  // the gold label. Boundaries may differ from `annotations`.
  std::vector<Annotation> reference;
};

struct Corpus {
  Task task = Task::kText;
  std::vector<std::string> classes;
  std::vector<Document> documents;
  std::string provenance;

  // Index of `name` in `classes`, or -1.
  int class_index(std::string_view name) const;
  // Throws ValidationError on the first broken invariant and fills in
  // is_error where only the gold label is known.
  void validate();
};

struct Unit {
  std::string uid;
  std::string doc_id;
  std::size_t doc_index = 0;
  UnitKind kind = UnitKind::kText;
  int begin = 0;
  int end = 0;
  int noisy_label = 0;
  std::optional<int> gold_label;
  std::optional<bool> is_error;
};

std::string make_uid(std::string_view doc_id, int offset);

// Units ordered by (doc_id, position). Throws ValidationError for malformed
// offsets.
std::vector<Unit> extract_units(const Corpus& corpus);

// Flipped label noise on exactly round(rate * n) units. The original label
// becomes the gold label; span boundaries are untouched.
Corpus inject_noise(const Corpus& corpus, double rate, std::uint64_t seed);

struct FoldAssignment {
  int k = 0;
  std::map<std::string, int> fold_of_doc;

  int fold_of(const std::string& doc_id) const;
  std::size_t fold_size(int fold) const;
};

FoldAssignment make_folds(const Corpus& corpus, int k, std::uint64_t seed);

// For span corpora with reference spans: align reference and noisy spans and
// set gold_label / is_error on each noisy span. Unmatched noisy spans are
// spurious and count as errors.
void resolve_span_gold(Document& doc);

}  // namespace aed

#endif  // AED_CORPUS_HPP_
