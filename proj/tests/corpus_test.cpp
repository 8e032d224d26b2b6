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

#include <set>

#include "aed/corpus.hpp"
#include "aed/error.hpp"
#include "aed/synth.hpp"
#include "test_util.hpp"

namespace aed {
namespace {

using testing::text_corpus;
using testing::token_corpus;

Corpus span_corpus() {
  Corpus c;
  c.task = Task::kSpan;
  c.classes = {"LOC", "PER"};
  Document d;
  d.id = "s1";
  d.tokens = {"John", "Smith", "lives", "in", "Rome"};
  d.annotations = {{0, 2, 1, {}, {}}, {4, 5, 0, {}, {}}};
  c.documents.push_back(d);
  c.validate();
  return c;
}

TEST(Corpus, ParseTask) {
  EXPECT_EQ(parse_task("text"), Task::kText);
  EXPECT_EQ(parse_task("token"), Task::kToken);
  EXPECT_EQ(parse_task("span"), Task::kSpan);
  EXPECT_THROW(parse_task("tokens"), ConfigError);
}

TEST(Corpus, ExtractUnitsText) {
  const Corpus c = text_corpus({0, 1, 0});
  const auto units = extract_units(c);
  ASSERT_EQ(units.size(), 3u);
  EXPECT_EQ(units[0].uid, "d000#0");
  EXPECT_EQ(units[1].noisy_label, 1);
  for (const Unit& u : units) EXPECT_EQ(u.kind, UnitKind::kText);
}

TEST(Corpus, ExtractUnitsToken) {
  const Corpus c =
      token_corpus({{"a", "b", "c", "d"}, {"e", "f", "g", "h", "i"}},
                   {{0, 1, 0, 1}, {1, 1, 0, 0, 1}}, {"X", "Y"});
  const auto units = extract_units(c);
  ASSERT_EQ(units.size(), 9u);
  EXPECT_EQ(units[4].uid, "s001#0");
  EXPECT_EQ(units[8].begin, 4);
  EXPECT_EQ(units[8].end, 5);
}

TEST(Corpus, ExtractUnitsSpan) {
  const auto units = extract_units(span_corpus());
  ASSERT_EQ(units.size(), 2u);
  EXPECT_EQ(units[0].uid, "s1#0");
  EXPECT_EQ(units[0].end, 2);
  EXPECT_EQ(units[1].uid, "s1#4");
  EXPECT_EQ(units[1].kind, UnitKind::kSpan);
}

TEST(Corpus, UnitsSortedByDocumentId) {
  Corpus c = text_corpus({0, 1, 0});
  std::swap(c.documents[0], c.documents[2]);
  const auto units = extract_units(c);
  EXPECT_EQ(units[0].doc_id, "d000");
  EXPECT_EQ(units[2].doc_id, "d002");
  EXPECT_EQ(c.documents[units[0].doc_index].id, "d000");
}

TEST(Corpus, UidsAreUnique) {
  SequenceSynthOptions o;
  o.sentences = 50;
  const auto units = extract_units(synth_token_corpus(o));
  std::set<std::string> seen;
  for (const Unit& u : units) EXPECT_TRUE(seen.insert(u.uid).second);
  EXPECT_EQ(extract_units(synth_token_corpus(o)).size(), units.size());
}

TEST(Corpus, ValidateRejectsBadInput) {
  Corpus c = text_corpus({0, 1});
  c.documents[1].id = c.documents[0].id;
  EXPECT_THROW(c.validate(), ValidationError);

  Corpus d = text_corpus({0, 1});
  d.documents[0].annotations[0].label = 5;
  EXPECT_THROW(d.validate(), ValidationError);

  Corpus e = text_corpus({0, 1});
  e.documents[0].id = "";
  EXPECT_THROW(e.validate(), ValidationError);

  Corpus s = span_corpus();
  s.documents[0].annotations[1].end = 9;
  EXPECT_THROW(s.validate(), ValidationError);

  Corpus t = span_corpus();
  t.documents[0].annotations[1] = {1, 3, 0, {}, {}};
  EXPECT_THROW(t.validate(), ValidationError);
}

TEST(Corpus, ValidateDerivesIsError) {
  const Corpus c = text_corpus({0, 1}, {"A", "B"}, {0, 0});
  const auto units = extract_units(c);
  EXPECT_EQ(units[0].is_error, false);
  EXPECT_EQ(units[1].is_error, true);
}

TEST(InjectNoise, ExactCount) {
  TextSynthOptions o;
  o.documents = 1000;
  const Corpus clean = synth_text_corpus(o);
  const Corpus noisy = inject_noise(clean, 0.05, 7);
  int errors = 0;
  for (const Unit& u : extract_units(noisy)) {
    ASSERT_TRUE(u.is_error.has_value());
    ASSERT_TRUE(u.gold_label.has_value());
    if (*u.is_error) {
      ++errors;
      EXPECT_NE(u.noisy_label, *u.gold_label);
    } else {
      EXPECT_EQ(u.noisy_label, *u.gold_label);
    }
  }
  EXPECT_EQ(errors, 50);
}

TEST(InjectNoise, RoundingRule) {
  std::vector<int> labels(4978);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = int(i % 2);
  const Corpus noisy = inject_noise(text_corpus(labels), 0.05, 3);
  int errors = 0;
  for (const Unit& u : extract_units(noisy)) errors += *u.is_error;
  EXPECT_EQ(errors, 249);
}

TEST(InjectNoise, ZeroRateIsIdentityOnLabels) {
  const Corpus clean = text_corpus({0, 1, 1, 0});
  const Corpus noisy = inject_noise(clean, 0.0, 1);
  const auto a = extract_units(clean);
  const auto b = extract_units(noisy);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].noisy_label, b[i].noisy_label);
    EXPECT_EQ(b[i].is_error, false);
  }
}

TEST(InjectNoise, Deterministic) {
  SequenceSynthOptions o;
  o.sentences = 80;
  const Corpus clean = synth_token_corpus(o);
  const auto a = extract_units(inject_noise(clean, 0.1, 11));
  const auto b = extract_units(inject_noise(clean, 0.1, 11));
  const auto c = extract_units(inject_noise(clean, 0.1, 12));
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].noisy_label, b[i].noisy_label);
    differs |= a[i].noisy_label != c[i].noisy_label;
  }
  EXPECT_TRUE(differs);
}

TEST(InjectNoise, SpanBoundariesUntouched) {
  SequenceSynthOptions o;
  o.sentences = 60;
  const Corpus clean = synth_span_corpus(o);
  const Corpus noisy = inject_noise(clean, 0.2, 5);
  const auto a = extract_units(clean);
  const auto b = extract_units(noisy);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].begin, b[i].begin);
    EXPECT_EQ(a[i].end, b[i].end);
    EXPECT_EQ(*b[i].gold_label, a[i].noisy_label);
  }
}

TEST(InjectNoise, RejectsBadRate) {
  EXPECT_THROW(inject_noise(text_corpus({0, 1}), 1.5, 0), ConfigError);
}

TEST(Folds, EvenSplit) {
  const FoldAssignment f = make_folds(text_corpus(std::vector<int>(100, 0)), 10, 1);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(f.fold_size(k), 10u);
}

TEST(Folds, UnevenSplit) {
  const FoldAssignment f = make_folds(text_corpus(std::vector<int>(101, 0)), 10, 1);
  std::multiset<std::size_t> sizes;
  for (int k = 0; k < 10; ++k) sizes.insert(f.fold_size(k));
  EXPECT_EQ(sizes.count(10), 9u);
  EXPECT_EQ(sizes.count(11), 1u);
}

TEST(Folds, PartitionAndDeterminism) {
  const Corpus c = text_corpus(std::vector<int>(37, 1));
  const FoldAssignment a = make_folds(c, 5, 9);
  const FoldAssignment b = make_folds(c, 5, 9);
  EXPECT_EQ(a.fold_of_doc, b.fold_of_doc);
  EXPECT_EQ(a.fold_of_doc.size(), c.documents.size());
  std::size_t total = 0;
  for (int k = 0; k < 5; ++k) total += a.fold_size(k);
  EXPECT_EQ(total, c.documents.size());
  for (const Document& d : c.documents) {
    const int k = a.fold_of(d.id);
    EXPECT_GE(k, 0);
    EXPECT_LT(k, 5);
  }
}

TEST(Folds, RejectsTooManyFolds) {
  EXPECT_ANY_THROW(make_folds(text_corpus({0, 1}), 3, 0));
}

TEST(ResolveSpanGold, AlignsReferenceSpans) {
  Document d;
  d.id = "x";
  d.tokens = {"New", "York", "City", "is", "big"};
  d.annotations = {{0, 2, 1, {}, {}}, {3, 4, 0, {}, {}}};
  d.reference = {{0, 3, 1, {}, {}}};
  resolve_span_gold(d);
  EXPECT_EQ(d.annotations[0].gold_label, 1);
  EXPECT_EQ(d.annotations[0].is_error, false);
  EXPECT_EQ(d.annotations[1].is_error, true);
}

}  // namespace
}  // namespace aed
