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

#include "aed/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "aed/error.hpp"
#include "aed/span_align.hpp"

namespace aed {

std::string_view task_name(Task task) {
  switch (task) {
    case Task::kText:
      return "text";
    case Task::kToken:
      return "token";
    case Task::kSpan:
      return "span";
  }
  return "?";
}

Task parse_task(std::string_view name) {
  if (name == "text") return Task::kText;
  if (name == "token") return Task::kToken;
  if (name == "span") return Task::kSpan;
  throw ConfigError("unknown task '" + std::string(name) +
                    "' (expected text, token or span)");
}

int Corpus::class_index(std::string_view name) const {
  auto it = std::find(classes.begin(), classes.end(), name);
  return it == classes.end() ? -1 : static_cast<int>(it - classes.begin());
}

namespace {

void check_label(const Document& doc, int label, std::size_t n_classes) {
  if (label < 0 || static_cast<std::size_t>(label) >= n_classes) {
    throw ValidationError(doc.id, "label index " + std::to_string(label) +
                                      " is not a known class");
  }
}

}  // namespace

void Corpus::validate() {
  if (classes.empty()) throw DataError("corpus has no classes");
  std::set<std::string> seen_classes(classes.begin(), classes.end());
  if (seen_classes.size() != classes.size()) {
    throw DataError("corpus class list contains duplicates");
  }
  std::set<std::string> ids;
  for (Document& doc : documents) {
    if (doc.id.empty()) throw ValidationError(doc.id, "empty document id");
    if (!ids.insert(doc.id).second) {
      throw ValidationError(doc.id, "duplicate document id");
    }
    const int n_tokens = static_cast<int>(doc.tokens.size());
    switch (task) {
      case Task::kText:
        if (doc.annotations.size() != 1) {
          throw ValidationError(doc.id,
                                "text documents carry exactly one label");
        }
        doc.annotations[0].begin = 0;
        doc.annotations[0].end = 0;
        break;
      case Task::kToken:
        if (doc.tokens.empty()) throw ValidationError(doc.id, "no tokens");
        if (static_cast<int>(doc.annotations.size()) != n_tokens) {
          throw ValidationError(doc.id, "token count and label count differ");
        }
        for (int i = 0; i < n_tokens; ++i) {
          if (doc.annotations[i].begin != i ||
              doc.annotations[i].end != i + 1) {
            throw ValidationError(doc.id, "token annotation " +
                                              std::to_string(i) +
                                              " has wrong offsets");
          }
        }
        break;
      case Task::kSpan: {
        if (doc.tokens.empty()) throw ValidationError(doc.id, "no tokens");
        auto check_spans = [&](std::vector<Annotation>& spans,
                               const char* what) {
          std::sort(spans.begin(), spans.end(),
                    [](const Annotation& a, const Annotation& b) {
                      return std::tie(a.begin, a.end) <
                             std::tie(b.begin, b.end);
                    });
          int last_end = 0;
          for (const Annotation& a : spans) {
            if (!(0 <= a.begin && a.begin < a.end && a.end <= n_tokens)) {
              throw ValidationError(
                  doc.id, std::string(what) + " span [" +
                              std::to_string(a.begin) + "," +
                              std::to_string(a.end) + ") is malformed for " +
                              std::to_string(n_tokens) + " tokens");
            }
            if (a.begin < last_end) {
              throw ValidationError(doc.id, std::string(what) +
                                                " spans overlap");
            }
            last_end = a.end;
          }
        };
        check_spans(doc.annotations, "annotated");
        check_spans(doc.reference, "reference");
        for (const Annotation& a : doc.reference) {
          check_label(doc, a.label, classes.size());
        }
        break;
      }
    }
    for (Annotation& a : doc.annotations) {
      check_label(doc, a.label, classes.size());
      if (a.gold_label) {
        check_label(doc, *a.gold_label, classes.size());
        if (!a.is_error) a.is_error = (a.label != *a.gold_label);
      }
    }
  }
}

std::string make_uid(std::string_view doc_id, int offset) {
  return std::string(doc_id) + "#" + std::to_string(offset);
}

std::vector<Unit> extract_units(const Corpus& corpus) {
  std::vector<std::size_t> order(corpus.documents.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus.documents[a].id < corpus.documents[b].id;
  });
  const UnitKind kind = corpus.task == Task::kText    ? UnitKind::kText
                        : corpus.task == Task::kToken ? UnitKind::kToken
                                                      : UnitKind::kSpan;
  std::vector<Unit> units;
  for (std::size_t d : order) {
    const Document& doc = corpus.documents[d];
    const int n_tokens = static_cast<int>(doc.tokens.size());
    std::vector<const Annotation*> anns;
    for (const Annotation& a : doc.annotations) anns.push_back(&a);
    std::sort(anns.begin(), anns.end(),
              [](const Annotation* a, const Annotation* b) {
                return std::tie(a->begin, a->end) < std::tie(b->begin, b->end);
              });
    int last_begin = -1;
    for (const Annotation* a : anns) {
      if (kind != UnitKind::kText) {
        if (!(0 <= a->begin && a->begin < a->end && a->end <= n_tokens)) {
          throw ValidationError(doc.id, "malformed offsets [" +
                                            std::to_string(a->begin) + "," +
                                            std::to_string(a->end) + ")");
        }
        if (a->begin == last_begin) {
          throw ValidationError(doc.id, "two units start at offset " +
                                            std::to_string(a->begin));
        }
      }
      last_begin = a->begin;
      Unit u;
      u.uid = make_uid(doc.id, a->begin);
      u.doc_id = doc.id;
      u.doc_index = d;
      u.kind = kind;
      u.begin = a->begin;
      u.end = a->end;
      u.noisy_label = a->label;
      u.gold_label = a->gold_label;
      u.is_error = a->is_error;
      if (u.gold_label && !u.is_error) {
        u.is_error = (u.noisy_label != *u.gold_label);
      }
      units.push_back(std::move(u));
    }
  }
  return units;
}

Corpus inject_noise(const Corpus& corpus, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw ConfigError("noise rate must lie in [0, 1]");
  }
  Corpus out = corpus;
  // Address annotations in unit order so the draw does not depend on the
  // in-memory document order.
  std::vector<std::size_t> doc_order(out.documents.size());
  std::iota(doc_order.begin(), doc_order.end(), 0);
  std::sort(doc_order.begin(), doc_order.end(),
            [&](std::size_t a, std::size_t b) {
              return out.documents[a].id < out.documents[b].id;
            });
  std::vector<Annotation*> slots;
  for (std::size_t d : doc_order) {
    Document& doc = out.documents[d];
    std::sort(doc.annotations.begin(), doc.annotations.end(),
              [](const Annotation& a, const Annotation& b) {
                return std::tie(a.begin, a.end) < std::tie(b.begin, b.end);
              });
    for (Annotation& a : doc.annotations) slots.push_back(&a);
  }
  const std::size_t n = slots.size();
  const auto n_flip =
      static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  if (n_flip > 0 && out.classes.size() < 2) {
    throw DataError("cannot flip labels with fewer than 2 classes");
  }

  for (Annotation* a : slots) {
    a->gold_label = a->label;
    a->is_error = false;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  const int n_classes = static_cast<int>(out.classes.size());
  for (std::size_t k = 0; k < n_flip; ++k) {
    Annotation& a = *slots[idx[k]];
    std::uniform_int_distribution<int> pick(0, n_classes - 2);
    int label = pick(rng);
    if (label >= a.label) ++label;
    a.label = label;
    a.is_error = true;
  }
  if (out.task == Task::kSpan) {
    for (Document& doc : out.documents) {
      doc.reference.clear();
      for (const Annotation& a : doc.annotations) {
        doc.reference.push_back(Annotation{a.begin, a.end, *a.gold_label,
                                           std::nullopt, std::nullopt});
      }
    }
  }
  return out;
}

int FoldAssignment::fold_of(const std::string& doc_id) const {
  auto it = fold_of_doc.find(doc_id);
  if (it == fold_of_doc.end()) {
    throw DataError("document '" + doc_id + "' has no fold");
  }
  return it->second;
}

std::size_t FoldAssignment::fold_size(int fold) const {
  return static_cast<std::size_t>(
      std::count_if(fold_of_doc.begin(), fold_of_doc.end(),
                    [&](const auto& kv) { return kv.second == fold; }));
}

FoldAssignment make_folds(const Corpus& corpus, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("fold count must be at least 2");
  if (static_cast<std::size_t>(k) > corpus.documents.size()) {
    throw ConfigError("fold count " + std::to_string(k) + " exceeds the " +
                      std::to_string(corpus.documents.size()) +
                      " documents");
  }
  std::vector<std::string> ids;
  for (const Document& d : corpus.documents) ids.push_back(d.id);
  std::sort(ids.begin(), ids.end());
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  FoldAssignment folds;
  folds.k = k;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    folds.fold_of_doc[ids[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  }
  return folds;
}

void resolve_span_gold(Document& doc) {
  std::vector<LabeledSpan> ref, cand;
  for (const Annotation& a : doc.reference) {
    ref.push_back({a.begin, a.end, a.label});
  }
  for (const Annotation& a : doc.annotations) {
    cand.push_back({a.begin, a.end, a.label});
  }
  const Alignment alignment = align_spans(ref, cand);
  for (Annotation& a : doc.annotations) {
    a.gold_label.reset();
    a.is_error = true;
  }
  for (const AlignedPair& p : alignment.pairs) {
    if (p.missing()) continue;
    Annotation& a = doc.annotations[*p.cand_index];
    a.gold_label = p.ref.label;
    a.is_error = (a.label != p.ref.label);
  }
}

}  // namespace aed
