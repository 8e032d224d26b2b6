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

#ifndef AED_SYNTH_HPP_
#define AED_SYNTH_HPP_

#include <cstddef>
#include <cstdint>

#include "aed/corpus.hpp"

namespace aed {

// Clean (noise-free) synthetic corpora for tests, benchmarks and demos.
// Every generator is deterministic in its seed.

struct TextSynthOptions {
  std::size_t documents = 1000;
  std::uint64_t seed = 1;
  int min_length = 10;
  int max_length = 16;
  // Indicative words of the document's own class.
  int class_words = 3;
  // Words seen in no other document.
  int rare_words = 2;
  std::size_t vocabulary_per_class = 40;
};

// Two classes, "neg" and "pos", separable by their class vocabularies.
Corpus synth_text_corpus(const TextSynthOptions& options);

struct SequenceSynthOptions {
  std::size_t sentences = 400;
  std::uint64_t seed = 1;
  // Span corpora: share of entity mentions drawn from a small recurring pool
  // (the rest are fresh names).
  double recurring_names = 0.5;
  // Span corpora: share of sentences from templates whose context says
  // nothing about the entity type.
  double generic_contexts = 0.3;
  // Span corpora: probability that a fresh name carries type morphology
  // (a suffix such as "-burg" or a trailing "Corp").
  double marked_names = 0.2;
};

// Part-of-speech style token labeling with suffix morphology, a few
// context-dependent ambiguous words and recurring stock sentences.
Corpus synth_token_corpus(const SequenceSynthOptions& options);

// Entity spans (PER, LOC, ORG, MISC) in templated sentences whose context
// hints at the type.
Corpus synth_span_corpus(const SequenceSynthOptions& options);

}  // namespace aed

#endif  // AED_SYNTH_HPP_
