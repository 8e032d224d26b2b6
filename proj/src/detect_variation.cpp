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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "aed/detect.hpp"
#include "aed/error.hpp"
#include "aed/features.hpp"

namespace aed {

namespace {

void require_sequence_task(const Corpus& corpus, std::string_view method) {
  if (corpus.task == Task::kText) {
    throw ConfigError(std::string(method) +
                      " needs a token or span labeling corpus");
  }
}

// Index of the unique most frequent label, or -1 on a tie.
int unique_mode(const std::vector<int>& counts) {
  int best = -1;
  int best_count = 0;
  bool tie = false;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > best_count) {
      best = static_cast<int>(c);
      best_count = counts[c];
      tie = false;
    } else if (counts[c] == best_count && best_count > 0) {
      tie = true;
    }
  }
  return tie ? -1 : best;
}

std::vector<int> suffix_array(const std::vector<int>& s) {
  const std::size_t n = s.size();
  std::vector<int> sa(n), rank(s.begin(), s.end()), tmp(n);
  std::iota(sa.begin(), sa.end(), 0);
  for (std::size_t k = 1;; k <<= 1) {
    auto key = [&](int i) {
      const auto j = std::size_t(i) + k;
      return std::make_pair(rank[std::size_t(i)], j < n ? rank[j] : -1);
    };
    std::sort(sa.begin(), sa.end(),
              [&](int a, int b) { return key(a) < key(b); });
    tmp[std::size_t(sa[0])] = 0;
    for (std::size_t i = 1; i < n; ++i) {
      tmp[std::size_t(sa[i])] =
          tmp[std::size_t(sa[i - 1])] + (key(sa[i - 1]) < key(sa[i]) ? 1 : 0);
    }
    rank = tmp;
    if (n == 0 || std::size_t(rank[std::size_t(sa[n - 1])]) == n - 1) break;
  }
  return sa;
}

// lcp[i] = longest common prefix of suffixes sa[i - 1] and sa[i].
std::vector<int> lcp_array(const std::vector<int>& s,
                           const std::vector<int>& sa) {
  const std::size_t n = s.size();
  std::vector<int> rank(n), lcp(n, 0);
  for (std::size_t i = 0; i < n; ++i) rank[std::size_t(sa[i])] = int(i);
  int h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rank[i] > 0) {
      const auto j = std::size_t(sa[std::size_t(rank[i]) - 1]);
      while (i + std::size_t(h) < n && j + std::size_t(h) < n &&
             s[i + std::size_t(h)] == s[j + std::size_t(h)]) {
        ++h;
      }
      lcp[std::size_t(rank[i])] = h;
      if (h > 0) --h;
    } else {
      h = 0;
    }
  }
  return lcp;
}

FlagVector token_variation_ngrams(const Corpus& corpus,
                                  std::span<const Unit> units) {
  // Lowercased token stream with a unique separator after every document,
  // so no repeat crosses a sentence boundary.
  std::unordered_map<std::string, int> vocab;
  std::vector<int> stream;
  std::vector<int> unit_at;
  std::vector<std::size_t> doc_start;
  for (std::size_t u = 0; u < units.size(); ++u) {
    if (u > 0 && units[u].doc_index != units[u - 1].doc_index) {
      stream.push_back(-1);
      unit_at.push_back(-1);
    }
    const Document& doc = corpus.documents[units[u].doc_index];
    const std::string w = lowercase(doc.tokens[std::size_t(units[u].begin)]);
    auto it = vocab.emplace(w, static_cast<int>(vocab.size())).first;
    stream.push_back(it->second);
    unit_at.push_back(static_cast<int>(u));
  }
  int next_sep = static_cast<int>(vocab.size());
  for (int& s : stream) {
    if (s < 0) s = next_sep++;
  }

  std::vector<bool> outvoted(units.size(), false);
  std::vector<bool> majority(units.size(), false);
  const std::size_t n = stream.size();
  if (n >= 2) {
    const std::vector<int> sa = suffix_array(stream);
    const std::vector<int> lcp = lcp_array(stream, sa);
    std::vector<int> counts(corpus.classes.size(), 0);

    auto process = [&](int len, std::size_t lb, std::size_t rb) {
      if (len < 2) return;
      // Left-maximal: the occurrences are not all preceded by one symbol.
      bool left_maximal = false;
      const int first_prev = sa[lb] > 0 ? stream[std::size_t(sa[lb]) - 1] : -1;
      for (std::size_t r = lb; r <= rb && !left_maximal; ++r) {
        const int prev = sa[r] > 0 ? stream[std::size_t(sa[r]) - 1] : -1;
        left_maximal = prev < 0 || prev != first_prev;
      }
      if (!left_maximal) return;
      for (int off = 0; off < len; ++off) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t r = lb; r <= rb; ++r) {
          const int u = unit_at[std::size_t(sa[r] + off)];
          ++counts[std::size_t(units[std::size_t(u)].noisy_label)];
        }
        const int mode = unique_mode(counts);
        if (mode < 0) continue;
        for (std::size_t r = lb; r <= rb; ++r) {
          const auto u = std::size_t(unit_at[std::size_t(sa[r] + off)]);
          if (units[u].noisy_label == mode) {
            majority[u] = true;
          } else {
            outvoted[u] = true;
          }
        }
      }
    };

    // Bottom-up traversal of the lcp-interval tree.
    struct Open {
      int len;
      std::size_t lb;
    };
    std::vector<Open> stack{{0, 0}};
    for (std::size_t i = 1; i <= n; ++i) {
      const int cur = i < n ? lcp[i] : 0;
      std::size_t lb = i - 1;
      while (cur < stack.back().len) {
        const Open top = stack.back();
        stack.pop_back();
        process(top.len, top.lb, i - 1);
        lb = top.lb;
      }
      if (cur > stack.back().len) stack.push_back({cur, lb});
    }
  }

  FlagVector out;
  out.method = "VN";
  for (std::size_t u = 0; u < units.size(); ++u) {
    out.uids.push_back(units[u].uid);
    out.flags.push_back(outvoted[u] && !majority[u]);
  }
  return out;
}

std::string context_token(const Document& doc, int i) {
  if (i < 0) return "<s>";
  if (i >= static_cast<int>(doc.tokens.size())) return "</s>";
  return lowercase(doc.tokens[std::size_t(i)]);
}

FlagVector span_variation_ngrams(const Corpus& corpus,
                                 std::span<const Unit> units) {
  const std::vector<std::string> forms = surface_forms(corpus, units);
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const Document& doc = corpus.documents[units[u].doc_index];
    groups[context_token(doc, units[u].begin - 1) + '\x1f' + forms[u] +
           '\x1f' + context_token(doc, units[u].end)]
        .push_back(u);
  }
  FlagVector out;
  out.method = "VN";
  out.flags.assign(units.size(), false);
  for (const Unit& u : units) out.uids.push_back(u.uid);
  std::vector<int> counts(corpus.classes.size());
  for (const auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t u : members) ++counts[std::size_t(units[u].noisy_label)];
    const int mode = unique_mode(counts);
    if (mode < 0) continue;
    for (std::size_t u : members) out.flags[u] = units[u].noisy_label != mode;
  }
  return out;
}

// Per unit: label counts of its surface form.
std::vector<const std::vector<int>*> form_counts(
    const std::vector<std::string>& forms, std::span<const Unit> units,
    std::size_t num_classes, std::map<std::string, std::vector<int>>& table) {
  for (std::size_t u = 0; u < units.size(); ++u) {
    auto& c = table[forms[u]];
    if (c.empty()) c.assign(num_classes, 0);
    ++c[std::size_t(units[u].noisy_label)];
  }
  std::vector<const std::vector<int>*> out;
  for (const std::string& f : forms) out.push_back(&table.at(f));
  return out;
}

}  // namespace

std::vector<std::string> surface_forms(const Corpus& corpus,
                                       std::span<const Unit> units) {
  std::vector<std::string> out;
  out.reserve(units.size());
  for (const Unit& u : units) {
    const Document& doc = corpus.documents[u.doc_index];
    std::string form;
    for (int i = u.begin; i < u.end; ++i) {
      if (i > u.begin) form += ' ';
      form += lowercase(doc.tokens[std::size_t(i)]);
    }
    out.push_back(std::move(form));
  }
  return out;
}

FlagVector variation_ngrams(const Corpus& corpus,
                            std::span<const Unit> units) {
  require_sequence_task(corpus, "VN");
  return corpus.task == Task::kToken ? token_variation_ngrams(corpus, units)
                                     : span_variation_ngrams(corpus, units);
}

ScoreVector label_entropy(const Corpus& corpus, std::span<const Unit> units) {
  require_sequence_task(corpus, "LE");
  std::map<std::string, std::vector<int>> table;
  const auto counts = form_counts(surface_forms(corpus, units), units,
                                  corpus.classes.size(), table);
  ScoreVector out;
  out.method = "LE";
  out.polarity = Polarity::kHighIsSuspicious;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const std::vector<int>& c = *counts[u];
    out.uids.push_back(units[u].uid);
    if (unique_mode(c) == units[u].noisy_label) {
      out.scores.push_back(0.0);
      continue;
    }
    const double total = std::accumulate(c.begin(), c.end(), 0.0);
    double h = 0.0;
    for (int x : c) {
      if (x > 0) h -= (x / total) * std::log(x / total);
    }
    out.scores.push_back(h);
  }
  return out;
}

ScoreVector weighted_discrepancy(const Corpus& corpus,
                                 std::span<const Unit> units) {
  require_sequence_task(corpus, "WD");
  std::map<std::string, std::vector<int>> table;
  const auto counts = form_counts(surface_forms(corpus, units), units,
                                  corpus.classes.size(), table);
  ScoreVector out;
  out.method = "WD";
  out.polarity = Polarity::kHighIsSuspicious;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const std::vector<int>& c = *counts[u];
    out.uids.push_back(units[u].uid);
    int distinct = 0, cmax = 0, cmin = 0, total = 0;
    for (int x : c) {
      if (x == 0) continue;
      cmin = distinct == 0 ? x : std::min(cmin, x);
      cmax = std::max(cmax, x);
      total += x;
      ++distinct;
    }
    if (distinct < 2 || unique_mode(c) == units[u].noisy_label) {
      out.scores.push_back(0.0);
    } else {
      out.scores.push_back(static_cast<double>(cmax - cmin) / total);
    }
  }
  return out;
}

}  // namespace aed
