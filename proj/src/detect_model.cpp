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
#include <numeric>

#include "aed/detect.hpp"
#include "aed/error.hpp"

namespace aed {

namespace {

std::size_t argmax(std::span<const double> row) {
  return static_cast<std::size_t>(
      std::max_element(row.begin(), row.end()) - row.begin());
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

FlagVector empty_flags(std::string_view method, std::span<const Unit> units) {
  FlagVector out;
  out.method = std::string(method);
  out.flags.assign(units.size(), false);
  for (const Unit& u : units) out.uids.push_back(u.uid);
  return out;
}

ScoreVector empty_scores(Method method, std::span<const Unit> units) {
  ScoreVector out;
  out.method = std::string(method_code(method));
  out.polarity = method_polarity(method);
  out.scores.assign(units.size(), 0.0);
  for (const Unit& u : units) out.uids.push_back(u.uid);
  return out;
}

void require_kind(const PredictionBundle& bundle, BundleKind kind,
                  std::string_view method) {
  if (bundle.kind() != kind) {
    static constexpr std::string_view names[] = {"single", "repeated",
                                                 "per-epoch"};
    throw ConfigError(std::string(method) + " needs a " +
                      std::string(names[static_cast<int>(kind)]) +
                      " prediction bundle");
  }
}

}  // namespace

FlagVector retag(const PredictionBundle& bundle, std::span<const Unit> units) {
  require_kind(bundle, BundleKind::kSingle, "RE");
  check_covers(bundle, units);
  FlagVector out = empty_flags("RE", units);
  for (std::size_t u = 0; u < units.size(); ++u) {
    out.flags[u] = argmax(bundle.row(u)) != std::size_t(units[u].noisy_label);
  }
  return out;
}

FlagVector confident_learning(const PredictionBundle& bundle,
                              std::span<const Unit> units) {
  require_kind(bundle, BundleKind::kSingle, "CL");
  check_covers(bundle, units);
  const std::size_t C = bundle.num_classes();
  std::vector<double> sum(C, 0.0);
  std::vector<std::size_t> count(C, 0);
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto j = std::size_t(units[u].noisy_label);
    sum[j] += bundle.row(u)[j];
    ++count[j];
  }
  FlagVector out = empty_flags("CL", units);
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto p = bundle.row(u);
    int best = -1;
    for (std::size_t k = 0; k < C; ++k) {
      if (count[k] == 0) continue;
      const double t = sum[k] / static_cast<double>(count[k]);
      if (p[k] < t) continue;
      if (best < 0 || p[k] > p[std::size_t(best)]) best = static_cast<int>(k);
    }
    out.flags[u] = best >= 0 && best != units[u].noisy_label;
  }
  return out;
}

ScoreVector classification_uncertainty(const PredictionBundle& bundle,
                                       std::span<const Unit> units) {
  require_kind(bundle, BundleKind::kSingle, "CU");
  check_covers(bundle, units);
  ScoreVector out = empty_scores(Method::kCU, units);
  for (std::size_t u = 0; u < units.size(); ++u) {
    out.scores[u] = 1.0 - bundle.row(u)[std::size_t(units[u].noisy_label)];
  }
  return out;
}

ScoreVector prediction_margin(const PredictionBundle& bundle,
                              std::span<const Unit> units) {
  require_kind(bundle, BundleKind::kSingle, "PM");
  check_covers(bundle, units);
  ScoreVector out = empty_scores(Method::kPM, units);
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto row = bundle.row(u);
    if (row.size() < 2) {
      out.scores[u] = 1.0;
      continue;
    }
    double first = -1.0, second = -1.0;
    for (double p : row) {
      if (p > first) {
        second = first;
        first = p;
      } else if (p > second) {
        second = p;
      }
    }
    out.scores[u] = first - second;
  }
  return out;
}

ScoreVector dropout_uncertainty(const PredictionBundle& repeated,
                                std::span<const Unit> units) {
  require_kind(repeated, BundleKind::kRepeated, "DU");
  check_covers(repeated, units);
  ScoreVector out = empty_scores(Method::kDU, units);
  const auto T = repeated.depth();
  for (std::size_t u = 0; u < units.size(); ++u) {
    double h = 0.0;
    for (std::size_t t = 0; t < T; ++t) h += entropy(repeated.row(u, t));
    out.scores[u] = h / static_cast<double>(T);
  }
  return out;
}

ScoreVector datamap_confidence(const PredictionBundle& per_epoch,
                               std::span<const Unit> units) {
  require_kind(per_epoch, BundleKind::kPerEpoch, "DM");
  check_covers(per_epoch, units);
  ScoreVector out = empty_scores(Method::kDM, units);
  const auto E = per_epoch.depth();
  for (std::size_t u = 0; u < units.size(); ++u) {
    double s = 0.0;
    for (std::size_t e = 0; e < E; ++e) {
      s += per_epoch.row(u, e)[std::size_t(units[u].noisy_label)];
    }
    out.scores[u] = s / static_cast<double>(E);
  }
  return out;
}

ScoreVector curriculum_spotter(const EpochRecord& record,
                               std::span<const Unit> units) {
  if (record.losses.size() != units.size()) {
    throw DataError("curriculum trace does not cover the corpus");
  }
  ScoreVector out = empty_scores(Method::kCS, units);
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& l = record.losses[u];
    out.scores[u] =
        l.empty() ? 0.0
                  : std::accumulate(l.begin(), l.end(), 0.0) /
                        static_cast<double>(l.size());
  }
  return out;
}

ScoreVector leitner_spotter(const EpochRecord& record,
                            std::span<const Unit> units) {
  if (record.decks.size() != units.size()) {
    throw DataError("leitner trace does not cover the corpus");
  }
  ScoreVector out = empty_scores(Method::kLS, units);
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& d = record.decks[u];
    if (d.empty()) continue;
    out.scores[u] = static_cast<double>(std::count(d.begin(), d.end(), 0)) /
                    static_cast<double>(d.size());
  }
  return out;
}

FlagVector label_aggregation(const PredictionBundle& repeated,
                             std::span<const Unit> units,
                             const DawidSkeneOptions& options) {
  require_kind(repeated, BundleKind::kRepeated, "LA");
  if (repeated.depth() < 2) {
    throw ConfigError("LA needs at least 2 passes");
  }
  check_covers(repeated, units);
  const std::size_t n = units.size();
  const std::size_t T = repeated.depth();
  std::vector<int> votes(n * T);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t t = 0; t < T; ++t) {
      votes[u * T + t] = static_cast<int>(argmax(repeated.row(u, t)));
    }
  }
  const DawidSkeneResult ds =
      dawid_skene(votes, n, T, repeated.num_classes(), options);
  FlagVector out = empty_flags("LA", units);
  for (std::size_t u = 0; u < n; ++u) {
    out.flags[u] = ds.labels[u] != units[u].noisy_label;
  }
  return out;
}

}  // namespace aed
