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

#include "aed/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "aed/error.hpp"
#include "aed/io.hpp"

namespace aed {

using nlohmann::ordered_json;

std::optional<double> EvalReport::headline() const {
  if (flagger) return flagger->f1;
  if (scorer) return scorer->average_precision;
  return std::nullopt;
}

std::vector<bool> gold_errors(std::span<const Unit> units) {
  std::vector<bool> out;
  out.reserve(units.size());
  for (const Unit& u : units) {
    if (!u.is_error) {
      throw DataError("unit '" + u.uid + "' has no gold error flag");
    }
    out.push_back(*u.is_error);
  }
  return out;
}

std::size_t top_cutoff(std::size_t n, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ConfigError("cutoff fraction must lie in [0, 1]");
  }
  const double m = std::ceil(fraction * static_cast<double>(n) - 1e-9);
  return std::min(n, static_cast<std::size_t>(std::max(0.0, m)));
}

std::vector<std::size_t> suspicion_order(const ScoreVector& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = scores.suspicion(a), sb = scores.suspicion(b);
    if (sa != sb) return sa > sb;
    return scores.uids[a] < scores.uids[b];
  });
  return order;
}

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

EvalReport base_report(const std::string& method,
                       std::span<const Unit> units,
                       const std::vector<bool>& gold) {
  EvalReport r;
  r.method = method;
  if (!units.empty()) {
    switch (units[0].kind) {
      case UnitKind::kText:
        r.task = "text";
        break;
      case UnitKind::kToken:
        r.task = "token";
        break;
      case UnitKind::kSpan:
        r.task = "span";
        break;
    }
  }
  r.n_units = units.size();
  r.n_errors = static_cast<std::size_t>(std::count(gold.begin(), gold.end(), true));
  return r;
}

}  // namespace

EvalReport eval_flagger(const FlagVector& flags, std::span<const Unit> units) {
  check_covers(flags, units);
  const std::vector<bool> gold = gold_errors(units);
  EvalReport r = base_report(flags.method, units, gold);
  double tp = 0.0, flagged = 0.0;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (flags.flags[i]) {
      flagged += 1.0;
      if (gold[i]) tp += 1.0;
    }
  }
  FlaggerMetrics m;
  m.precision = ratio(tp, flagged);
  m.recall = ratio(tp, static_cast<double>(r.n_errors));
  m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
  m.pct_flagged = ratio(flagged, static_cast<double>(units.size()));
  r.flagger = m;
  return r;
}

EvalReport eval_scorer(const ScoreVector& scores, std::span<const Unit> units) {
  check_covers(scores, units);
  const std::vector<bool> gold = gold_errors(units);
  EvalReport r = base_report(scores.method, units, gold);
  const std::vector<std::size_t> order = suspicion_order(scores);
  ScorerMetrics m;
  m.cutoff = top_cutoff(units.size(), 0.10);
  double hits = 0.0, ap = 0.0, hits_at_m = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (gold[order[rank]]) {
      hits += 1.0;
      ap += hits / static_cast<double>(rank + 1);
    }
    if (rank + 1 == m.cutoff) hits_at_m = hits;
  }
  if (r.n_errors == 0) {
    m.ap_absent_reason = "no errors in gold data";
  } else {
    m.average_precision = ap / static_cast<double>(r.n_errors);
  }
  m.precision_at_10 = ratio(hits_at_m, static_cast<double>(m.cutoff));
  m.recall_at_10 = ratio(hits_at_m, static_cast<double>(r.n_errors));
  r.scorer = m;
  return r;
}

FlagVector scorer_to_flags(const ScoreVector& scores, double fraction) {
  const std::size_t m = top_cutoff(scores.size(), fraction);
  const std::vector<std::size_t> order = suspicion_order(scores);
  FlagVector out;
  char tag[32];
  std::snprintf(tag, sizeof tag, "@%g", fraction);
  out.method = scores.method + tag;
  out.uids = scores.uids;
  out.flags.assign(scores.size(), false);
  for (std::size_t i = 0; i < m; ++i) out.flags[order[i]] = true;
  return out;
}

double harmonic_mean_summary(std::span<const double> values) {
  if (values.empty()) throw ConfigError("harmonic mean of nothing");
  double inv = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw DataError("harmonic mean needs values >= 0");
    if (v == 0.0) return 0.0;
    inv += 1.0 / v;
  }
  return static_cast<double>(values.size()) / inv;
}

// ---------------------------------------------------------------------------
// Report documents

namespace {

std::string cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("NA");
}

std::map<std::string, double> method_summary(
    std::span<const EvalReport> reports) {
  std::map<std::string, std::vector<double>> by_method;
  for (const EvalReport& r : reports) {
    if (auto h = r.headline()) by_method[r.method].push_back(*h);
  }
  std::map<std::string, double> out;
  for (const auto& [method, values] : by_method) {
    out[method] = harmonic_mean_summary(values);
  }
  return out;
}

}  // namespace

std::string report_tsv(std::span<const EvalReport> reports) {
  std::ostringstream out;
  out << "#aed-report v1\n";
  out << "dataset\ttask\tmethod\tkind\tn_units\tn_errors\tprecision\trecall"
         "\tf1\tpct_flagged\tap\tp_at_10\tr_at_10\n";
  for (const EvalReport& r : reports) {
    out << r.dataset << '\t' << r.task << '\t' << r.method << '\t'
        << (r.flagger ? "flagger" : "scorer") << '\t' << r.n_units << '\t'
        << r.n_errors;
    if (r.flagger) {
      out << '\t' << format_double(r.flagger->precision) << '\t'
          << format_double(r.flagger->recall) << '\t'
          << format_double(r.flagger->f1) << '\t'
          << format_double(r.flagger->pct_flagged) << "\tNA\tNA\tNA\n";
    } else {
      out << "\tNA\tNA\tNA\tNA\t" << cell(r.scorer->average_precision) << '\t'
          << format_double(r.scorer->precision_at_10) << '\t'
          << format_double(r.scorer->recall_at_10) << '\n';
    }
  }
  for (const auto& [method, h] : method_summary(reports)) {
    out << "#harmonic-mean\t" << method << '\t' << format_double(h) << '\n';
  }
  return out.str();
}

std::string report_json(std::span<const EvalReport> reports) {
  ordered_json doc;
  doc["schema"] = "aed-report v1";
  ordered_json rows = ordered_json::array();
  for (const EvalReport& r : reports) {
    ordered_json row;
    row["dataset"] = r.dataset;
    row["task"] = r.task;
    row["method"] = r.method;
    row["n_units"] = r.n_units;
    row["n_errors"] = r.n_errors;
    if (r.flagger) {
      row["kind"] = "flagger";
      row["precision"] = r.flagger->precision;
      row["recall"] = r.flagger->recall;
      row["f1"] = r.flagger->f1;
      row["pct_flagged"] = r.flagger->pct_flagged;
    } else {
      row["kind"] = "scorer";
      if (r.scorer->average_precision) {
        row["average_precision"] = *r.scorer->average_precision;
      } else {
        row["average_precision"] = nullptr;
        row["average_precision_absent"] = r.scorer->ap_absent_reason;
      }
      row["precision_at_10pct"] = r.scorer->precision_at_10;
      row["recall_at_10pct"] = r.scorer->recall_at_10;
      row["cutoff"] = r.scorer->cutoff;
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  ordered_json summary = ordered_json::object();
  for (const auto& [method, h] : method_summary(reports)) summary[method] = h;
  doc["harmonic_mean"] = std::move(summary);
  return doc.dump(2) + "\n";
}

std::vector<EvalReport> parse_report_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw DataError(std::string("report is not valid JSON: ") + e.what());
  }
  if (doc.value("schema", "") != "aed-report v1") {
    throw DataError("report lacks schema 'aed-report v1'");
  }
  std::vector<EvalReport> out;
  for (const auto& row : doc.at("rows")) {
    EvalReport r;
    r.dataset = row.at("dataset").get<std::string>();
    r.task = row.at("task").get<std::string>();
    r.method = row.at("method").get<std::string>();
    r.n_units = row.at("n_units").get<std::size_t>();
    r.n_errors = row.at("n_errors").get<std::size_t>();
    if (row.at("kind") == "flagger") {
      FlaggerMetrics m;
      m.precision = row.at("precision").get<double>();
      m.recall = row.at("recall").get<double>();
      m.f1 = row.at("f1").get<double>();
      m.pct_flagged = row.at("pct_flagged").get<double>();
      r.flagger = m;
    } else {
      ScorerMetrics m;
      if (!row.at("average_precision").is_null()) {
        m.average_precision = row.at("average_precision").get<double>();
      } else {
        m.ap_absent_reason = row.value("average_precision_absent", "");
      }
      m.precision_at_10 = row.at("precision_at_10pct").get<double>();
      m.recall_at_10 = row.at("recall_at_10pct").get<double>();
      m.cutoff = row.at("cutoff").get<std::size_t>();
      r.scorer = m;
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_report(std::span<const EvalReport> reports,
                  const std::filesystem::path& tsv_path,
                  const std::filesystem::path& json_path) {
  std::ofstream tsv(tsv_path);
  if (!tsv) throw DataError("cannot write " + tsv_path.string());
  tsv << report_tsv(reports);
  std::ofstream json(json_path);
  if (!json) throw DataError("cannot write " + json_path.string());
  json << report_json(reports);
}

}  // namespace aed
