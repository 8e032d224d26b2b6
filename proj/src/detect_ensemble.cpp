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
#include <numeric>

#include "aed/detect.hpp"
#include "aed/error.hpp"

namespace aed {

namespace {

FlagVector plurality_flags(std::span<const PredictionBundle> members,
                           std::span<const Unit> units, const char* method) {
  if (members.size() < 2) {
    throw ConfigError(std::string(method) + " needs at least 2 members");
  }
  for (const PredictionBundle& b : members) {
    if (b.kind() != BundleKind::kSingle) {
      throw ConfigError(std::string(method) +
                        " members must be single prediction bundles");
    }
    check_covers(b, units);
  }
  const std::size_t C = members[0].num_classes();
  FlagVector out;
  out.method = method;
  std::vector<int> votes(C);
  for (std::size_t u = 0; u < units.size(); ++u) {
    std::fill(votes.begin(), votes.end(), 0);
    for (const PredictionBundle& b : members) {
      const auto row = b.row(u);
      ++votes[std::size_t(std::max_element(row.begin(), row.end()) -
                          row.begin())];
    }
    const int top = *std::max_element(votes.begin(), votes.end());
    const auto winners = std::count(votes.begin(), votes.end(), top);
    const auto plurality = std::size_t(
        std::max_element(votes.begin(), votes.end()) - votes.begin());
    out.uids.push_back(units[u].uid);
    out.flags.push_back(winners == 1 &&
                        plurality != std::size_t(units[u].noisy_label));
  }
  return out;
}

}  // namespace

FlagVector diverse_ensemble(std::span<const PredictionBundle> members,
                            std::span<const Unit> units) {
  return plurality_flags(members, units, "DE");
}

FlagVector projection_ensemble(std::span<const PredictionBundle> members,
                               std::span<const Unit> units) {
  return plurality_flags(members, units, "PE");
}

FlagVector irt_flag(const IrtFit& fit, std::span<const Unit> units) {
  if (fit.a.size() != units.size()) {
    throw DataError("IRT fit does not cover the corpus");
  }
  FlagVector out;
  out.method = "IRT";
  for (std::size_t u = 0; u < units.size(); ++u) {
    out.uids.push_back(units[u].uid);
    out.flags.push_back(fit.a[u] < 0.0);
  }
  return out;
}

ScoreVector borda_count(std::span<const ScoreVector> scorers,
                        std::size_t top) {
  if (scorers.empty()) throw ConfigError("BC needs at least one scorer");
  const std::size_t used =
      top == 0 ? scorers.size() : std::min(top, scorers.size());
  const std::size_t n = scorers[0].size();
  for (std::size_t s = 1; s < used; ++s) {
    if (scorers[s].uids != scorers[0].uids) {
      throw DataError("BC inputs cover different units");
    }
  }
  ScoreVector out;
  out.method = "BC";
  out.polarity = Polarity::kHighIsSuspicious;
  out.uids = scorers[0].uids;
  out.scores.assign(n, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t s = 0; s < used; ++s) {
    const ScoreVector& sv = scorers[s];
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return sv.suspicion(a) > sv.suspicion(b);
                     });
    // Rank r (1-based) earns n - r + 1 points; a block of ties shares the
    // mean of the points it spans.
    for (std::size_t r = 0; r < n;) {
      std::size_t e = r + 1;
      while (e < n && sv.suspicion(order[e]) == sv.suspicion(order[r])) ++e;
      const double first = static_cast<double>(n - r);
      const double last = static_cast<double>(n - e + 1);
      const double points = 0.5 * (first + last);
      for (std::size_t j = r; j < e; ++j) out.scores[order[j]] += points;
      r = e;
    }
  }
  return out;
}

}  // namespace aed
