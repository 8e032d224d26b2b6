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

#ifndef AED_FEATURES_HPP_
#define AED_FEATURES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aed/kernels.hpp"

namespace aed {

enum class FeatureFamily {
  kTextBow,
  kTextCharNgram,
  kTextTfidf,
  kTokenWindow,
  kTokenSuffix,
  kTokenChar,
};

std::string_view family_name(FeatureFamily family);
FeatureFamily parse_family(std::string_view name);
bool is_text_family(FeatureFamily family);

// 64-bit FNV-1a; stable across platforms and runs.
std::uint64_t fnv1a(std::string_view s, std::uint64_t seed = 0);

// Derives an independent seed for a (seed, salt) pair (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

std::string lowercase(std::string_view s);

// Feature strings of one text (sequence of whitespace tokens).
std::vector<std::string> text_features(FeatureFamily family,
                                       std::span<const std::string> tokens);

// Feature strings of token `i` within its sentence.
std::vector<std::string> token_features(FeatureFamily family,
                                        std::span<const std::string> tokens,
                                        std::size_t i);

// Hashes feature strings into 2^bits buckets (summing collisions), scales
// each bucket by `bucket_weight` when given, L2-normalizes, and appends a
// bias at index 2^bits. The resulting vector lives in a space of dimension
// 2^bits + 1.
SparseVector hash_features(std::span<const std::string> features, int bits,
                           std::span<const double> bucket_weight = {});

inline std::size_t hashed_dim(int bits) { return (std::size_t{1} << bits) + 1; }

}  // namespace aed

#endif  // AED_FEATURES_HPP_
