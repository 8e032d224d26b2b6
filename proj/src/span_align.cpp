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

#include "aed/span_align.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "aed/assignment.hpp"
#include "aed/error.hpp"

namespace aed {

int overlap(const LabeledSpan& a, const LabeledSpan& b) {
  return std::max(0, std::min(a.end, b.end) - std::max(a.begin, b.begin));
}

// ---------------------------------------------------------------------------
// BIO

namespace {

bool starts_with(const std::string& s, const char* prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

BioDecodeResult decode_bio(std::span<const std::string> tags,
                           BioRepair policy) {
  BioDecodeResult result;
  std::optional<TypedSpan> open;
  auto close = [&](int at) {
    if (open) {
      open->end = at;
      result.spans.push_back(std::move(*open));
      open.reset();
    }
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    const int pos = static_cast<int>(i);
    if (tag == "O") {
      close(pos);
    } else if (starts_with(tag, "B-") && tag.size() > 2) {
      close(pos);
      open = TypedSpan{pos, pos, tag.substr(2)};
    } else if (starts_with(tag, "I-") && tag.size() > 2) {
      const std::string type = tag.substr(2);
      if (open && open->type == type) continue;
      if (policy == BioRepair::kStrict) {
        throw DataError("tag " + tag + " at position " + std::to_string(i) +
                        " does not continue a " + type + " span");
      }
      close(pos);
      open = TypedSpan{pos, pos, type};
      ++result.repairs;
    } else {
      throw DataError("not a BIO tag: '" + tag + "'");
    }
  }
  close(static_cast<int>(tags.size()));
  return result;
}

std::vector<std::string> encode_bio(int n_tokens,
                                    std::span<const TypedSpan> spans) {
  std::vector<std::string> tags(static_cast<std::size_t>(n_tokens), "O");
  std::vector<const TypedSpan*> sorted;
  for (const TypedSpan& s : spans) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(),
            [](const TypedSpan* a, const TypedSpan* b) {
              return a->begin < b->begin;
            });
  int last_end = 0;
  for (const TypedSpan* s : sorted) {
    if (s->begin < 0 || s->end > n_tokens || s->begin >= s->end) {
      throw DataError("span [" + std::to_string(s->begin) + "," +
                      std::to_string(s->end) + ") outside sentence of " +
                      std::to_string(n_tokens) + " tokens");
    }
    if (s->begin < last_end) {
      throw DataError("overlapping spans cannot be BIO encoded");
    }
    tags[s->begin] = "B-" + s->type;
    for (int i = s->begin + 1; i < s->end; ++i) tags[i] = "I-" + s->type;
    last_end = s->end;
  }
  return tags;
}

BioTagset BioTagset::from_types(std::span<const std::string> types) {
  std::vector<std::string> tags{"O"};
  for (const std::string& t : types) {
    tags.push_back("B-" + t);
    tags.push_back("I-" + t);
  }
  return parse(tags);
}

BioTagset BioTagset::parse(std::span<const std::string> tags) {
  BioTagset set;
  set.tags_.assign(tags.begin(), tags.end());
  bool has_outside = false;
  std::vector<std::optional<std::size_t>> begins, insides;
  auto type_slot = [&](const std::string& type) {
    auto it = std::find(set.types_.begin(), set.types_.end(), type);
    if (it != set.types_.end()) {
      return static_cast<std::size_t>(it - set.types_.begin());
    }
    set.types_.push_back(type);
    begins.emplace_back();
    insides.emplace_back();
    return set.types_.size() - 1;
  };
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    if (tag == "O") {
      if (has_outside) throw DataError("duplicate O tag");
      has_outside = true;
      set.outside_ = i;
    } else if ((starts_with(tag, "B-") || starts_with(tag, "I-")) &&
               tag.size() > 2) {
      const std::size_t slot = type_slot(tag.substr(2));
      auto& target = tag[0] == 'B' ? begins[slot] : insides[slot];
      if (target) throw DataError("duplicate tag " + tag);
      target = i;
    } else {
      throw DataError("tagset is not BIO-decomposable: '" + tag + "'");
    }
  }
  if (!has_outside) throw DataError("tagset is not BIO-decomposable: no O");
  for (std::size_t t = 0; t < set.types_.size(); ++t) {
    if (!begins[t] || !insides[t]) {
      throw DataError("tagset is not BIO-decomposable: type " +
                      set.types_[t] + " lacks its B- or I- tag");
    }
    set.begin_.push_back(*begins[t]);
    set.inside_.push_back(*insides[t]);
  }
  return set;
}

int BioTagset::tag_index(const std::string& tag) const {
  auto it = std::find(tags_.begin(), tags_.end(), tag);
  return it == tags_.end() ? -1 : static_cast<int>(it - tags_.begin());
}

// ---------------------------------------------------------------------------
// Alignment

int Alignment::total_overlap() const {
  int total = 0;
  for (const AlignedPair& p : pairs) total += p.overlap;
  return total;
}

namespace {

// Optimal total overlap over the free rows/cols. Forbidden (zero-overlap)
// pairs cost the same as leaving both sides unmatched, so padding to a
// square matrix with zero-cost dummies yields the constrained optimum.
int max_overlap(const std::vector<std::vector<int>>& ov,
                const std::vector<std::size_t>& rows,
                const std::vector<std::size_t>& cols) {
  const std::size_t n = rows.size() + cols.size();
  if (rows.empty() || cols.empty()) return 0;
  std::vector<std::int64_t> cost(n * n, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      cost[i * n + j] = -ov[rows[i]][cols[j]];
    }
  }
  const std::vector<int> assignment = solve_assignment(cost, n, n);
  int total = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int j = assignment[i];
    if (j >= 0 && static_cast<std::size_t>(j) < cols.size()) {
      total += ov[rows[i]][cols[j]];
    }
  }
  return total;
}

}  // namespace

Alignment align_spans(std::span<const LabeledSpan> ref,
                      std::span<const LabeledSpan> cand) {
  auto by_offsets = [](std::span<const LabeledSpan> spans) {
    std::vector<std::size_t> order(spans.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return std::tie(spans[a].begin, spans[a].end) <
                              std::tie(spans[b].begin, spans[b].end);
                     });
    return order;
  };
  const std::vector<std::size_t> ref_order = by_offsets(ref);
  const std::vector<std::size_t> cand_order = by_offsets(cand);

  std::vector<std::vector<int>> ov(ref.size(), std::vector<int>(cand.size()));
  for (std::size_t i = 0; i < ref.size(); ++i) {
    for (std::size_t j = 0; j < cand.size(); ++j) {
      ov[i][j] = overlap(ref[i], cand[j]);
    }
  }

  // Fix matches one reference span at a time (in offset order), taking the
  // first candidate (in offset order) that still admits an optimal
  // completion. This realizes the lexicographic tie-break exactly.
  std::vector<std::size_t> free_rows = ref_order;
  std::vector<std::size_t> free_cols = cand_order;
  int remaining = max_overlap(ov, free_rows, free_cols);
  std::vector<std::optional<std::size_t>> match(ref.size());
  for (std::size_t r : ref_order) {
    free_rows.erase(std::find(free_rows.begin(), free_rows.end(), r));
    bool fixed = false;
    for (std::size_t c : cand_order) {
      if (ov[r][c] == 0) continue;
      auto it = std::find(free_cols.begin(), free_cols.end(), c);
      if (it == free_cols.end()) continue;
      std::vector<std::size_t> cols = free_cols;
      cols.erase(cols.begin() + (it - free_cols.begin()));
      const int rest = max_overlap(ov, free_rows, cols);
      if (rest + ov[r][c] == remaining) {
        match[r] = c;
        free_cols = std::move(cols);
        remaining = rest;
        fixed = true;
        break;
      }
    }
    if (!fixed) {
      // Leaving r unmatched must then be optimal.
      remaining = max_overlap(ov, free_rows, free_cols);
    }
  }

  Alignment out;
  std::vector<char> used(cand.size(), 0);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    AlignedPair p;
    p.ref_index = i;
    p.ref = ref[i];
    if (match[i]) {
      p.cand_index = *match[i];
      p.matched = cand[*match[i]];
      p.overlap = ov[i][*match[i]];
      used[*match[i]] = 1;
    } else {
      p.matched = LabeledSpan{ref[i].begin, ref[i].end, kMissingLabel};
    }
    out.pairs.push_back(p);
  }
  for (std::size_t j = 0; j < cand.size(); ++j) {
    if (!used[j]) out.dropped.push_back(j);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

Aggregation parse_aggregation(const std::string& name) {
  if (name == "mean") return Aggregation::kMean;
  if (name == "min") return Aggregation::kMin;
  if (name == "max") return Aggregation::kMax;
  if (name == "median") return Aggregation::kMedian;
  throw ConfigError("unknown aggregation '" + name +
                    "' (expected mean, min, max or median)");
}

ProbRow aggregate_span_probs(std::span<const ProbRow> token_rows,
                             Aggregation mode) {
  if (token_rows.empty()) throw DataError("cannot aggregate zero rows");
  const std::size_t n_classes = token_rows.front().size();
  for (const ProbRow& row : token_rows) {
    if (row.size() != n_classes) {
      throw DataError("aggregated rows differ in class count");
    }
  }
  ProbRow out(n_classes, 0.0);
  std::vector<double> column(token_rows.size());
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (std::size_t t = 0; t < token_rows.size(); ++t) {
      column[t] = token_rows[t][c];
    }
    switch (mode) {
      case Aggregation::kMean:
        out[c] = std::accumulate(column.begin(), column.end(), 0.0) /
                 static_cast<double>(column.size());
        break;
      case Aggregation::kMin:
        out[c] = *std::min_element(column.begin(), column.end());
        break;
      case Aggregation::kMax:
        out[c] = *std::max_element(column.begin(), column.end());
        break;
      case Aggregation::kMedian: {
        std::sort(column.begin(), column.end());
        const std::size_t mid = column.size() / 2;
        out[c] = column.size() % 2 == 1
                     ? column[mid]
                     : 0.5 * (column[mid - 1] + column[mid]);
        break;
      }
    }
  }
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  if (total > 0.0) {
    for (double& p : out) p /= total;
  } else {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(n_classes));
  }
  return out;
}

ProbRow span_label_distribution(std::span<const ProbRow> bio_rows,
                                const BioTagset& tagset, Aggregation mode) {
  for (const ProbRow& row : bio_rows) {
    if (row.size() != tagset.tags().size()) {
      throw DataError("probability row does not match the BIO tagset");
    }
  }
  const ProbRow tags = aggregate_span_probs(bio_rows, mode);
  const std::size_t n_types = tagset.types().size();
  ProbRow r(n_types + 1);
  for (std::size_t t = 0; t < n_types; ++t) {
    r[t] = tags[tagset.begin_index(t)] + tags[tagset.inside_index(t)];
  }
  r[n_types] = tags[tagset.outside_index()];
  return r;
}

}  // namespace aed
