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

#ifndef AED_SPAN_ALIGN_HPP_
#define AED_SPAN_ALIGN_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aed {

using ProbRow = std::vector<double>;

struct LabeledSpan {
  int begin = 0;
  int end = 0;
  int label = 0;

  int length() const { return end - begin; }
  bool operator==(const LabeledSpan&) const = default;
};

int overlap(const LabeledSpan& a, const LabeledSpan& b);

// ---------------------------------------------------------------------------
// BIO tags

struct TypedSpan {
  int begin = 0;
  int end = 0;
  std::string type;

  bool operator==(const TypedSpan&) const = default;
};

enum class BioRepair {
  // An I-X that does not continue an X span opens a new span, as if B-X.
  kTreatAsBegin,
  // Throw DataError instead.
  kStrict,
};

struct BioDecodeResult {
  std::vector<TypedSpan> spans;
  int repairs = 0;
};

BioDecodeResult decode_bio(std::span<const std::string> tags,
                           BioRepair policy = BioRepair::kTreatAsBegin);

// Throws DataError on overlapping spans or offsets outside [0, n_tokens).
std::vector<std::string> encode_bio(int n_tokens,
                                    std::span<const TypedSpan> spans);

// A tagset decomposed into O plus B-/I- tags per entity type.
class BioTagset {
 public:
  // Tags ordered O, B-t0, I-t0, B-t1, I-t1, ...
  static BioTagset from_types(std::span<const std::string> types);
  // Any permutation of a complete BIO tagset. Throws DataError if a tag is
  // neither O nor B-X / I-X, or if a type lacks its B- or I- tag.
  static BioTagset parse(std::span<const std::string> tags);

  const std::vector<std::string>& tags() const { return tags_; }
  const std::vector<std::string>& types() const { return types_; }
  std::size_t outside_index() const { return outside_; }
  std::size_t begin_index(std::size_t type) const { return begin_[type]; }
  std::size_t inside_index(std::size_t type) const { return inside_[type]; }
  // -1 if unknown.
  int tag_index(const std::string& tag) const;

 private:
  std::vector<std::string> tags_;
  std::vector<std::string> types_;
  std::size_t outside_ = 0;
  std::vector<std::size_t> begin_;
  std::vector<std::size_t> inside_;
};

// ---------------------------------------------------------------------------
// Alignment

inline constexpr int kMissingLabel = -1;

struct AlignedPair {
  std::size_t ref_index = 0;
  LabeledSpan ref;
  // Label kMissingLabel with the ref offsets when no candidate was matched.
  LabeledSpan matched;
  std::optional<std::size_t> cand_index;
  int overlap = 0;

  bool missing() const { return !cand_index.has_value(); }
};

struct Alignment {
  // One entry per reference span, in input order.
  std::vector<AlignedPair> pairs;
  // Candidates not matched to any reference span, in input order.
  std::vector<std::size_t> dropped;

  int total_overlap() const;
};

// Maximum-overlap matching between reference and candidate spans of one
// document. Zero-overlap pairs are never matched. Among optimal matchings the
// one preferred lexicographically by (ref.begin, ref.end, cand.begin,
// cand.end) is returned.
Alignment align_spans(std::span<const LabeledSpan> ref,
                      std::span<const LabeledSpan> cand);

// ---------------------------------------------------------------------------
// Token -> span probability aggregation

enum class Aggregation { kMean, kMin, kMax, kMedian };

Aggregation parse_aggregation(const std::string& name);

// Elementwise aggregation over token rows, renormalized to sum 1.
ProbRow aggregate_span_probs(std::span<const ProbRow> token_rows,
                             Aggregation mode = Aggregation::kMean);

// Collapses BIO-tag rows of a span's tokens into one row over
// [types..., O]: the tag rows are aggregated per tag, then
// mass(X) = agg(B-X) + agg(I-X). Under the mean this equals summing per
// token first; under min a multi-token span loses most of its mass, since
// no single tag is likely on every token.
ProbRow span_label_distribution(std::span<const ProbRow> bio_rows,
                                const BioTagset& tagset,
                                Aggregation mode = Aggregation::kMean);

}  // namespace aed

#endif  // AED_SPAN_ALIGN_HPP_
