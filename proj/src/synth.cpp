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

#include "aed/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "aed/error.hpp"

namespace aed {

namespace {

constexpr const char* kSyllables[] = {
    "ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo", "ze", "pa", "qu", "ba",
    "do", "fi", "gu", "ha", "je", "ko", "lu", "ma", "no", "pi", "re", "so",
    "tu", "va", "wi", "xo", "yu", "zi", "be", "ce", "da", "fo", "ga", "hi"};
constexpr std::size_t kNumSyllables = std::size(kSyllables);

class WordMaker {
 public:
  explicit WordMaker(std::uint64_t seed) : rng_(seed) {}

  // A word of `min`..`max` syllables not produced before by this maker.
  std::string fresh(int min, int max) {
    std::uniform_int_distribution<int> len(min, max);
    std::uniform_int_distribution<std::size_t> syl(0, kNumSyllables - 1);
    for (;;) {
      std::string w;
      const int n = len(rng_);
      for (int i = 0; i < n; ++i) w += kSyllables[syl(rng_)];
      if (used_.insert(w).second) return w;
    }
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::set<std::string> used_;
};

std::string capitalize(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = char(w[0] - 'a' + 'A');
  return w;
}

std::string doc_id(char prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%06zu", prefix, i);
  return buf;
}

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, v.size() - 1);
  return v[d(rng)];
}

}  // namespace

Corpus synth_text_corpus(const TextSynthOptions& o) {
  if (o.documents < 2 || o.min_length < 1 || o.max_length < o.min_length) {
    throw ConfigError("bad text synthesis options");
  }
  WordMaker words(o.seed);
  std::vector<std::vector<std::string>> class_vocab(2);
  for (auto& v : class_vocab) {
    for (std::size_t i = 0; i < o.vocabulary_per_class; ++i) {
      v.push_back(words.fresh(2, 3));
    }
  }
  std::vector<std::string> filler;
  for (int i = 0; i < 200; ++i) filler.push_back(words.fresh(1, 3));

  Corpus c;
  c.task = Task::kText;
  c.classes = {"neg", "pos"};
  c.provenance = "synthetic text, seed " + std::to_string(o.seed);
  std::mt19937_64& rng = words.rng();
  std::uniform_int_distribution<int> len(o.min_length, o.max_length);
  for (std::size_t d = 0; d < o.documents; ++d) {
    const int label = static_cast<int>(d % 2);
    std::vector<std::string> tokens;
    for (int i = 0; i < o.class_words; ++i) {
      tokens.push_back(pick(class_vocab[std::size_t(label)], rng));
    }
    for (int i = 0; i < o.rare_words; ++i) tokens.push_back(words.fresh(4, 4));
    const int n = std::max(len(rng), int(tokens.size()));
    while (int(tokens.size()) < n) tokens.push_back(pick(filler, rng));
    std::shuffle(tokens.begin(), tokens.end(), rng);
    Document doc;
    doc.id = doc_id('t', d);
    doc.tokens = tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      doc.text += (i ? " " : "") + tokens[i];
    }
    doc.annotations.push_back(Annotation{0, 0, label, std::nullopt,
                                         std::nullopt});
    c.documents.push_back(std::move(doc));
  }
  c.validate();
  return c;
}

Corpus synth_token_corpus(const SequenceSynthOptions& o) {
  if (o.sentences < 2) throw ConfigError("bad token synthesis options");
  // Alphabetical, the order a column reader assigns.
  enum Tag { ADJ, ADP, ADV, DET, NOUN, PRON, PUNCT, VERB };
  const std::vector<std::string> tag_names = {"ADJ",  "ADP",  "ADV",   "DET",
                                              "NOUN", "PRON", "PUNCT", "VERB"};
  WordMaker words(o.seed);
  std::vector<std::vector<std::string>> lex(8);
  lex[DET] = {"the", "a", "this", "every"};
  lex[ADP] = {"in", "on", "with", "near", "under"};
  lex[PRON] = {"she", "he", "they", "we"};
  lex[PUNCT] = {"."};
  const std::vector<std::string> noun_suffix = {"tion", "ness", "ment", "er"};
  const std::vector<std::string> verb_suffix = {"ed", "s", "izes"};
  const std::vector<std::string> adj_suffix = {"ous", "ful", "ive", "al"};
  const std::vector<std::string> adv_suffix = {"ly"};
  auto fill = [&](Tag t, int n, const std::vector<std::string>& suffixes) {
    for (int i = 0; i < n; ++i) {
      lex[t].push_back(words.fresh(1, 2) + pick(suffixes, words.rng()));
    }
  };
  fill(NOUN, 40, noun_suffix);
  fill(VERB, 30, verb_suffix);
  fill(ADJ, 30, adj_suffix);
  fill(ADV, 12, adv_suffix);
  // Noun after a determiner or adjective, verb after a pronoun.
  const std::vector<std::string> ambiguous = {"club", "run", "light",
                                              "watch", "park", "ship"};

  const std::vector<std::vector<Tag>> templates = {
      {DET, ADJ, NOUN, VERB, ADP, DET, NOUN, PUNCT},
      {PRON, VERB, DET, NOUN, ADV, PUNCT},
      {DET, NOUN, VERB, DET, ADJ, NOUN, PUNCT},
      {PRON, ADV, VERB, ADP, DET, NOUN, PUNCT},
      {DET, NOUN, ADP, DET, NOUN, VERB, ADV, PUNCT},
  };
  std::mt19937_64& rng = words.rng();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto sentence = [&]() {
    const std::vector<Tag>& tpl = pick(templates, rng);
    std::vector<std::pair<std::string, int>> out;
    for (Tag t : tpl) {
      std::string w = pick(lex[t], rng);
      if ((t == NOUN || (t == VERB && !out.empty() &&
                         out.back().second == PRON)) &&
          unit(rng) < 0.15) {
        w = pick(ambiguous, rng);
      }
      out.emplace_back(w, t);
    }
    return out;
  };
  std::vector<std::vector<std::pair<std::string, int>>> stock;
  for (int i = 0; i < 12; ++i) stock.push_back(sentence());

  Corpus c;
  c.task = Task::kToken;
  c.classes = tag_names;
  c.provenance = "synthetic token labeling, seed " + std::to_string(o.seed);
  for (std::size_t s = 0; s < o.sentences; ++s) {
    const auto words_tags = unit(rng) < 0.3 ? pick(stock, rng) : sentence();
    Document doc;
    doc.id = doc_id('s', s);
    for (std::size_t i = 0; i < words_tags.size(); ++i) {
      std::string w = words_tags[i].first;
      if (i == 0) w = capitalize(w);
      doc.tokens.push_back(w);
      doc.annotations.push_back(Annotation{int(i), int(i) + 1,
                                           words_tags[i].second, std::nullopt,
                                           std::nullopt});
    }
    c.documents.push_back(std::move(doc));
  }
  c.validate();
  return c;
}

Corpus synth_span_corpus(const SequenceSynthOptions& o) {
  if (o.sentences < 2 || !(o.recurring_names >= 0.0 && o.recurring_names <= 1.0)) {
    throw ConfigError("bad span synthesis options");
  }
  enum Type { PER, LOC, ORG, MISC };
  WordMaker words(o.seed);
  std::mt19937_64& rng = words.rng();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::string> first_names;
  for (int i = 0; i < 20; ++i) first_names.push_back(capitalize(words.fresh(2, 2)));
  const std::vector<std::string> loc_suffix = {"burg", "ton", "ia", "vale"};
  const std::vector<std::string> org_suffix = {"Corp", "Group", "Bank",
                                               "Motors", "Labs"};
  const std::vector<std::string> misc_suffix = {"ian", "ese", "ic"};

  auto fresh_name = [&](Type t) -> std::vector<std::string> {
    if (unit(rng) >= o.marked_names) {
      if (unit(rng) < 0.5) return {capitalize(words.fresh(2, 3))};
      return {capitalize(words.fresh(1, 2)), capitalize(words.fresh(2, 2))};
    }
    switch (t) {
      case PER:
        return {pick(first_names, rng), capitalize(words.fresh(2, 3))};
      case LOC:
        if (unit(rng) < 0.3) {
          return {"Port", capitalize(words.fresh(1, 2) + pick(loc_suffix, rng))};
        }
        return {capitalize(words.fresh(1, 2) + pick(loc_suffix, rng))};
      case ORG:
        return {capitalize(words.fresh(1, 2)), pick(org_suffix, rng)};
      case MISC:
        return {capitalize(words.fresh(1, 2) + pick(misc_suffix, rng))};
    }
    return {};
  };
  std::vector<std::vector<std::vector<std::string>>> pool(4);
  for (int t = 0; t < 4; ++t) {
    for (int i = 0; i < 12; ++i) pool[std::size_t(t)].push_back(fresh_name(Type(t)));
  }

  // "#TYPE" marks an entity slot.
  const std::vector<std::vector<std::string>> templates = {
      {"yesterday", "#PER", "said", "that", "#ORG", "would", "expand", "into",
       "#LOC", "."},
      {"the", "#MISC", "festival", "in", "#LOC", "attracted", "visitors", "."},
      {"#PER", "joined", "#ORG", "last", "year", "."},
      {"officials", "in", "#LOC", "praised", "#PER", "."},
      {"#ORG", "shares", "rose", "after", "the", "#MISC", "announcement", "."},
      {"according", "to", "#PER", ",", "the", "#LOC", "office", "will",
       "close", "."},
      {"fans", "of", "the", "#MISC", "team", "met", "in", "#LOC", "."},
      {"#PER", "and", "#PER", "visited", "#ORG", "headquarters", "."},
      {"mr", "#PER", "spoke", "to", "reporters", "in", "#LOC", "."},
      {"a", "#MISC", "delegation", "met", "#ORG", "executives", "."},
  };
  const std::vector<std::vector<std::string>> generic = {
      {"the", "report", "mentioned", "#ANY", "twice", "."},
      {"#ANY", "was", "in", "the", "news", "again", "."},
      {"nobody", "expected", "#ANY", "to", "appear", "."},
      {"we", "discussed", "#ANY", "and", "#ANY", "today", "."},
  };
  const std::vector<std::string> type_names = {"PER", "LOC", "ORG", "MISC"};
  std::uniform_int_distribution<int> any_type(0, 3);

  Corpus c;
  c.task = Task::kSpan;
  c.classes = {"LOC", "MISC", "ORG", "PER"};
  c.provenance = "synthetic span labeling, seed " + std::to_string(o.seed);
  for (std::size_t s = 0; s < o.sentences; ++s) {
    Document doc;
    doc.id = doc_id('s', s);
    const auto& tpl = unit(rng) < o.generic_contexts ? pick(generic, rng)
                                                      : pick(templates, rng);
    for (const std::string& slot : tpl) {
      if (slot.size() < 2 || slot[0] != '#') {
        doc.tokens.push_back(slot);
        continue;
      }
      const auto type =
          slot == "#ANY"
              ? static_cast<Type>(any_type(rng))
              : static_cast<Type>(std::find(type_names.begin(),
                                            type_names.end(), slot.substr(1)) -
                                  type_names.begin());
      const std::vector<std::string> name =
          unit(rng) < o.recurring_names ? pick(pool[type], rng)
                                        : fresh_name(type);
      const int begin = static_cast<int>(doc.tokens.size());
      doc.tokens.insert(doc.tokens.end(), name.begin(), name.end());
      doc.annotations.push_back(Annotation{
          begin, static_cast<int>(doc.tokens.size()),
          c.class_index(type_names[type]), std::nullopt, std::nullopt});
    }
    if (!doc.tokens.empty()) doc.tokens[0] = capitalize(doc.tokens[0]);
    c.documents.push_back(std::move(doc));
  }
  c.validate();
  return c;
}

}  // namespace aed
