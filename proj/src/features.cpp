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

#include "aed/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include "aed/error.hpp"

namespace aed {

std::string_view family_name(FeatureFamily family) {
  switch (family) {
    case FeatureFamily::kTextBow:
      return "text-bow";
    case FeatureFamily::kTextCharNgram:
      return "text-char";
    case FeatureFamily::kTextTfidf:
      return "text-tfidf";
    case FeatureFamily::kTokenWindow:
      return "token-window";
    case FeatureFamily::kTokenSuffix:
      return "token-suffix";
    case FeatureFamily::kTokenChar:
      return "token-char";
  }
  return "?";
}

FeatureFamily parse_family(std::string_view name) {
  for (FeatureFamily f :
       {FeatureFamily::kTextBow, FeatureFamily::kTextCharNgram,
        FeatureFamily::kTextTfidf, FeatureFamily::kTokenWindow,
        FeatureFamily::kTokenSuffix, FeatureFamily::kTokenChar}) {
    if (family_name(f) == name) return f;
  }
  throw ConfigError("unknown model family '" + std::string(name) + "'");
}

bool is_text_family(FeatureFamily family) {
  return family == FeatureFamily::kTextBow ||
         family == FeatureFamily::kTextCharNgram ||
         family == FeatureFamily::kTextTfidf;
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

namespace {

std::string shape(std::string_view word) {
  std::string out;
  for (unsigned char c : word) {
    const char s = std::isupper(c)   ? 'X'
                   : std::islower(c) ? 'x'
                   : std::isdigit(c) ? 'd'
                                     : static_cast<char>(c);
    if (out.empty() || out.back() != s) out.push_back(s);
  }
  return out;
}

void char_ngrams(std::string_view word, std::size_t n, const char* tag,
                 std::vector<std::string>& out) {
  const std::string padded = "<" + std::string(word) + ">";
  if (padded.size() < n) {
    out.push_back(std::string(tag) + padded);
    return;
  }
  for (std::size_t i = 0; i + n <= padded.size(); ++i) {
    out.push_back(std::string(tag) + padded.substr(i, n));
  }
}

std::string context_word(std::span<const std::string> tokens, long i) {
  if (i < 0) return "<s>";
  if (i >= static_cast<long>(tokens.size())) return "</s>";
  return lowercase(tokens[std::size_t(i)]);
}

}  // namespace

std::vector<std::string> text_features(FeatureFamily family,
                                       std::span<const std::string> tokens) {
  std::vector<std::string> out;
  switch (family) {
    case FeatureFamily::kTextBow:
      for (const std::string& t : tokens) out.push_back("w=" + lowercase(t));
      break;
    case FeatureFamily::kTextCharNgram:
      for (const std::string& t : tokens) {
        char_ngrams(lowercase(t), 3, "c3=", out);
        char_ngrams(lowercase(t), 4, "c4=", out);
      }
      break;
    case FeatureFamily::kTextTfidf:
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        out.push_back("w=" + lowercase(tokens[i]));
        if (i + 1 < tokens.size()) {
          out.push_back("b=" + lowercase(tokens[i]) + "_" +
                        lowercase(tokens[i + 1]));
        }
      }
      break;
    default:
      throw ConfigError("model family " + std::string(family_name(family)) +
                        " is not a text family");
  }
  return out;
}

std::vector<std::string> token_features(FeatureFamily family,
                                        std::span<const std::string> tokens,
                                        std::size_t i) {
  std::vector<std::string> out;
  const std::string word = lowercase(tokens[i]);
  const long pos = static_cast<long>(i);
  switch (family) {
    case FeatureFamily::kTokenWindow:
      out.push_back("w=" + word);
      out.push_back("p3=" + word.substr(0, 3));
      out.push_back("s3=" + word.substr(word.size() - std::min<std::size_t>(3, word.size())));
      out.push_back("shape=" + shape(tokens[i]));
      for (long off : {-2L, -1L, 1L, 2L}) {
        out.push_back("w" + std::to_string(off) + "=" +
                      context_word(tokens, pos + off));
      }
      break;
    case FeatureFamily::kTokenSuffix:
      for (std::size_t n = 1; n <= 4; ++n) {
        const std::size_t len = std::min(n, word.size());
        out.push_back("s" + std::to_string(n) + "=" +
                      word.substr(word.size() - len));
        out.push_back("p" + std::to_string(n) + "=" + word.substr(0, len));
      }
      out.push_back("shape=" + shape(tokens[i]));
      out.push_back("w-1=" + context_word(tokens, pos - 1));
      out.push_back("w+1=" + context_word(tokens, pos + 1));
      break;
    case FeatureFamily::kTokenChar:
      char_ngrams(word, 3, "c3=", out);
      out.push_back("shape=" + shape(tokens[i]));
      out.push_back("shape-1=" +
                    (pos > 0 ? shape(tokens[i - 1]) : std::string("<s>")));
      out.push_back("shape+1=" + (i + 1 < tokens.size()
                                      ? shape(tokens[i + 1])
                                      : std::string("</s>")));
      out.push_back("w-1=" + context_word(tokens, pos - 1));
      break;
    default:
      throw ConfigError("model family " + std::string(family_name(family)) +
                        " is not a token family");
  }
  return out;
}

SparseVector hash_features(std::span<const std::string> features, int bits,
                           std::span<const double> bucket_weight) {
  const std::uint64_t mask = (std::uint64_t{1} << bits) - 1;
  std::map<std::uint32_t, double> buckets;
  for (const std::string& f : features) {
    buckets[static_cast<std::uint32_t>(fnv1a(f) & mask)] += 1.0;
  }
  SparseVector v;
  double norm = 0.0;
  for (auto& [idx, value] : buckets) {
    if (!bucket_weight.empty()) value *= bucket_weight[idx];
    v.index.push_back(idx);
    v.value.push_back(value);
    norm += value * value;
  }
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v.value) x /= norm;
  }
  // No features, no bias: an empty input scores zero logits.
  if (!v.index.empty()) {
    v.index.push_back(static_cast<std::uint32_t>(mask + 1));
    v.value.push_back(1.0);
  }
  return v;
}

}  // namespace aed
