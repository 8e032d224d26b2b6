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

#include <fstream>

#include "aed/error.hpp"
#include "aed/io.hpp"
#include "aed/span_align.hpp"
#include "aed/synth.hpp"
#include "test_util.hpp"

namespace aed {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = testing::temp_dir("io"); }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

void expect_same_corpus(const Corpus& a, const Corpus& b) {
  EXPECT_EQ(a.task, b.task);
  EXPECT_EQ(a.classes, b.classes);
  ASSERT_EQ(a.documents.size(), b.documents.size());
  for (std::size_t d = 0; d < a.documents.size(); ++d) {
    EXPECT_EQ(a.documents[d].id, b.documents[d].id);
    EXPECT_EQ(a.documents[d].tokens, b.documents[d].tokens);
    EXPECT_EQ(a.documents[d].annotations, b.documents[d].annotations);
  }
}

TEST_F(IoTest, TextCorpusClassesSorted) {
  const Corpus c = read_text_corpus(
      write("a.jsonl",
            "{\"id\": \"d1\", \"text\": \"good film\", \"label\": \"pos\"}\n"
            "{\"id\": \"d2\", \"text\": \"bad film\", \"label\": \"neg\"}\n"));
  EXPECT_EQ(c.classes, (std::vector<std::string>{"neg", "pos"}));
  EXPECT_EQ(extract_units(c).size(), 2u);
}

TEST_F(IoTest, TextCorpusGoldLabel) {
  const Corpus c = read_text_corpus(write(
      "a.jsonl",
      "{\"id\": \"d1\", \"text\": \"x\", \"label\": \"pos\", \"gold_label\": "
      "\"neg\"}\n{\"id\": \"d2\", \"text\": \"y\", \"label\": \"neg\"}\n"));
  const auto units = extract_units(c);
  EXPECT_EQ(units[0].is_error, true);
  EXPECT_FALSE(units[1].is_error.has_value());
}

TEST_F(IoTest, TextCorpusErrors) {
  EXPECT_THROW(read_text_corpus(write("e.jsonl", "")), DataError);
  EXPECT_THROW(read_text_corpus(write("b.jsonl", "{\"id\": \"d1\"}\n")),
               DataError);
  EXPECT_THROW(read_text_corpus(write("c.jsonl", "not json\n")), DataError);
  EXPECT_THROW(read_text_corpus(dir_ / "missing.jsonl"), DataError);
}

TEST_F(IoTest, ColumnCorpusSpans) {
  const Corpus c = read_column_corpus(
      write("a.conll", "John\tB-PER\nSmith\tI-PER\nin\tO\nRome\tB-LOC\n\n"),
      Task::kSpan);
  const auto units = extract_units(c);
  ASSERT_EQ(units.size(), 2u);
  EXPECT_EQ(units[0].begin, 0);
  EXPECT_EQ(units[0].end, 2);
  EXPECT_EQ(c.classes[units[0].noisy_label], "PER");
  EXPECT_EQ(units[1].begin, 3);
  EXPECT_EQ(units[1].end, 4);
  EXPECT_EQ(c.classes[units[1].noisy_label], "LOC");
}

TEST_F(IoTest, ColumnCorpusNoSpans) {
  const Corpus c = read_column_corpus(
      write("a.conll", "a\tO\nb\tO\nc\tO\n\nd\tB-X\n"), Task::kSpan);
  EXPECT_EQ(c.documents[0].annotations.size(), 0u);
}

TEST_F(IoTest, ColumnCorpusDanglingInsideRepaired) {
  const Corpus c = read_column_corpus(
      write("a.conll", "the\tO\nAlps\tI-LOC\n"), Task::kSpan);
  EXPECT_EQ(last_bio_repairs(), 1);
  ASSERT_EQ(c.documents[0].annotations.size(), 1u);
  EXPECT_EQ(c.documents[0].annotations[0].begin, 1);
  EXPECT_EQ(c.documents[0].annotations[0].end, 2);
}

TEST_F(IoTest, ColumnCorpusTokenGold) {
  const Corpus c = read_column_corpus(
      write("a.conll", "# id = first\nthe\tDET\tDET\nrun\tVERB\tNOUN\n"),
      Task::kToken);
  EXPECT_EQ(c.documents[0].id, "first");
  const auto units = extract_units(c);
  EXPECT_EQ(units[0].is_error, false);
  EXPECT_EQ(units[1].is_error, true);
}

TEST_F(IoTest, ColumnCorpusErrors) {
  EXPECT_THROW(read_column_corpus(write("a.conll", "\n\n"), Task::kToken),
               DataError);
  EXPECT_THROW(
      read_column_corpus(write("b.conll", "a\tX\tY\tZ\n"), Task::kToken),
      DataError);
}

TEST_F(IoTest, RoundTripAllFormats) {
  TextSynthOptions t;
  t.documents = 30;
  SequenceSynthOptions s;
  s.sentences = 30;
  const Corpus corpora[] = {inject_noise(synth_text_corpus(t), 0.1, 1),
                            inject_noise(synth_token_corpus(s), 0.1, 1),
                            inject_noise(synth_span_corpus(s), 0.1, 1)};
  int n = 0;
  for (const Corpus& c : corpora) {
    const fs::path p = dir_ / ("rt" + std::to_string(n++) + ".txt");
    write_corpus(c, p);
    const Corpus back = read_corpus(p, c.task);
    expect_same_corpus(c, back);
    const auto a = extract_units(c);
    const auto b = extract_units(back);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].is_error, b[i].is_error);
      EXPECT_EQ(a[i].gold_label, b[i].gold_label);
    }
  }
}

TEST_F(IoTest, SpanBioReencodingStable) {
  SequenceSynthOptions s;
  s.sentences = 40;
  const Corpus c = synth_span_corpus(s);
  write_corpus(c, dir_ / "a.conll");
  const Corpus once = read_corpus(dir_ / "a.conll", Task::kSpan);
  write_corpus(once, dir_ / "b.conll");
  const Corpus twice = read_corpus(dir_ / "b.conll", Task::kSpan);
  expect_same_corpus(once, twice);
  EXPECT_EQ(last_bio_repairs(), 0);
}

TEST_F(IoTest, PredictionsRead) {
  const Corpus c = testing::text_corpus({0, 1}, {"A", "B"});
  const PredictionBundle b = read_predictions(
      write("p.tsv",
            "#aed-pred v1 model=m kind=single classes=A,B\n"
            "d000#0\t0.9\t0.1\nd001#0\t0.2\t0.8\n"),
      c);
  EXPECT_DOUBLE_EQ(b.row(0)[0], 0.9);
  EXPECT_EQ(b.model_name(), "m");
}

TEST_F(IoTest, PredictionsRejectBadSums) {
  const Corpus c = testing::text_corpus({0, 1}, {"A", "B"});
  EXPECT_THROW(read_predictions(
                   write("p.tsv",
                         "#aed-pred v1 model=m kind=single classes=A,B\n"
                         "d000#0\t0.9\t0.0994\nd001#0\t0.2\t0.8\n"),
                   c),
               DataError);
}

TEST_F(IoTest, PredictionsRejectMissingAndUnknownUids) {
  const Corpus c = testing::text_corpus({0, 1}, {"A", "B"});
  const std::string head = "#aed-pred v1 model=m kind=single classes=A,B\n";
  try {
    read_predictions(write("p.tsv", head + "d000#0\t0.5\t0.5\n"), c);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("d001#0"), std::string::npos);
  }
  EXPECT_THROW(read_predictions(write("q.tsv", head +
                                                   "d000#0\t0.5\t0.5\n"
                                                   "d001#0\t0.5\t0.5\n"
                                                   "zzz#0\t0.5\t0.5\n"),
                                c),
               DataError);
  EXPECT_THROW(
      read_predictions(
          write("r.tsv",
                "#aed-pred v1 model=m kind=single classes=B,A\n"
                "d000#0\t0.5\t0.5\nd001#0\t0.5\t0.5\n"),
          c),
      DataError);
}

TEST_F(IoTest, RepeatedBundleShapeAndRoundTrip) {
  const Corpus c = testing::text_corpus({0, 1, 1}, {"c0", "c1"});
  const auto units = extract_units(c);
  std::vector<std::vector<std::vector<double>>> rows(3);
  for (int i = 0; i < 3; ++i) {
    for (int t = 0; t < 10; ++t) {
      const double p = 0.05 + 0.09 * t + 0.01 * i;
      rows[i].push_back({p, 1 - p});
    }
  }
  PredictionBundle b = testing::deep_bundle(units, rows, BundleKind::kRepeated);
  write_predictions(b, dir_ / "r.tsv");
  const PredictionBundle back = read_predictions(dir_ / "r.tsv", c);
  EXPECT_EQ(back.kind(), BundleKind::kRepeated);
  EXPECT_EQ(back.depth(), 10u);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t t = 0; t < 10; ++t) {
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_NEAR(back.row(i, t)[k], b.row(i, t)[k], 1e-9);
      }
    }
  }
}

TEST_F(IoTest, SingleBundleRoundTripIsExact) {
  const Corpus c = testing::text_corpus({0, 1}, {"A", "B"});
  const auto units = extract_units(c);
  const PredictionBundle b = testing::single_bundle(
      units, {{1.0 / 3.0, 2.0 / 3.0}, {0.1, 0.9}}, {"A", "B"});
  write_predictions(b, dir_ / "s.tsv");
  const PredictionBundle back = read_predictions(dir_ / "s.tsv", c);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_NEAR(back.row(i)[k], b.row(i)[k], 1e-15);
    }
  }
}

TEST_F(IoTest, Embeddings) {
  const Corpus c = testing::text_corpus({0, 1, 0});
  const EmbeddingSet e = read_embeddings(
      write("e.tsv",
            "#aed-emb v1 name=toy dim=4\n"
            "d000#0\t1\t0\t0\t0\nd001#0\t0\t1\t0\t0\nd002#0\t0\t0\t1\t0\n"),
      c);
  EXPECT_EQ(e.dim, 4u);
  EXPECT_EQ(e.uids.size(), 3u);
  EXPECT_DOUBLE_EQ(e.row(2)[2], 1.0);

  write_embeddings(e, dir_ / "f.tsv");
  EXPECT_EQ(read_embeddings(dir_ / "f.tsv", c).data, e.data);
}

TEST_F(IoTest, EmbeddingErrors) {
  const Corpus c = testing::text_corpus({0, 1, 0});
  try {
    read_embeddings(write("e.tsv",
                          "#aed-emb v1 name=toy dim=2\n"
                          "d000#0\t1\t0\nd002#0\t0\t1\n"),
                    c);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("d001#0"), std::string::npos);
  }
  EXPECT_THROW(read_embeddings(write("n.tsv",
                                     "#aed-emb v1 name=toy dim=2\n"
                                     "d000#0\t1\t0\nd001#0\tnan\t1\n"
                                     "d002#0\t0\t1\n"),
                               c),
               DataError);
  EXPECT_THROW(read_embeddings(write("d.tsv",
                                     "#aed-emb v1 name=toy dim=2\n"
                                     "d000#0\t1\t0\t3\n"),
                               c),
               DataError);
}

TEST_F(IoTest, FoldsRoundTrip) {
  const Corpus c = testing::text_corpus(std::vector<int>(23, 0));
  const FoldAssignment f = make_folds(c, 4, 2);
  write_folds(f, dir_ / "folds.tsv");
  const FoldAssignment back = read_folds(dir_ / "folds.tsv");
  EXPECT_EQ(back.k, 4);
  EXPECT_EQ(back.fold_of_doc, f.fold_of_doc);
}

TEST(FormatDouble, RoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 0.9999999999999999, 123456.789}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

}  // namespace
}  // namespace aed
