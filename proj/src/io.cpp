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

#include "aed/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "aed/error.hpp"
#include "aed/span_align.hpp"
#include "json.hpp"

namespace aed {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// PredictionBundle

PredictionBundle::PredictionBundle(std::string model_name,
                                   std::vector<std::string> classes,
                                   BundleKind kind, std::size_t depth,
                                   std::vector<std::string> uids)
    : model_name_(std::move(model_name)),
      classes_(std::move(classes)),
      kind_(kind),
      depth_(depth),
      uids_(std::move(uids)) {
  if (depth_ == 0) throw Error("prediction bundle depth must be positive");
  if (kind_ == BundleKind::kSingle && depth_ != 1) {
    throw Error("single prediction bundles have depth 1");
  }
  data_.assign(uids_.size() * depth_ * classes_.size(), 0.0);
}

std::span<double> PredictionBundle::row(std::size_t unit, std::size_t pass) {
  const std::size_t c = classes_.size();
  return {data_.data() + (unit * depth_ + pass) * c, c};
}

std::span<const double> PredictionBundle::row(std::size_t unit,
                                              std::size_t pass) const {
  const std::size_t c = classes_.size();
  return {data_.data() + (unit * depth_ + pass) * c, c};
}

std::vector<double> PredictionBundle::mean_row(std::size_t unit) const {
  std::vector<double> out(classes_.size(), 0.0);
  for (std::size_t t = 0; t < depth_; ++t) {
    auto r = row(unit, t);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += r[c];
  }
  for (double& p : out) p /= static_cast<double>(depth_);
  return out;
}

void PredictionBundle::check_stochastic(double tolerance) const {
  for (std::size_t i = 0; i < uids_.size(); ++i) {
    for (std::size_t t = 0; t < depth_; ++t) {
      double sum = 0.0;
      for (double p : row(i, t)) {
        if (!std::isfinite(p) || p < 0.0) {
          throw DataError("unit " + uids_[i] + ": invalid probability");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > tolerance) {
        throw DataError("unit " + uids_[i] + ": row sums to " +
                        format_double(sum));
      }
    }
  }
}

void check_covers(const PredictionBundle& bundle,
                  std::span<const Unit> units) {
  if (bundle.size() != units.size()) {
    throw DataError("bundle '" + bundle.model_name() + "' covers " +
                    std::to_string(bundle.size()) + " units, corpus has " +
                    std::to_string(units.size()));
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (bundle.uids()[i] != units[i].uid) {
      throw DataError("bundle '" + bundle.model_name() +
                      "' is not aligned with the corpus at unit " +
                      units[i].uid);
    }
  }
}

// ---------------------------------------------------------------------------
// Helpers

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

thread_local int g_bio_repairs = 0;

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> split_whitespace(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw DataError(where + ": not a number: '" + s + "'");
  }
  if (!std::isfinite(value)) {
    throw DataError(where + ": non-finite value '" + s + "'");
  }
  return value;
}

long parse_int(const std::string& s, const std::string& where) {
  long value = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError(where + ": not an integer: '" + s + "'");
  }
  return value;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

// Parses "#<magic> v1 key=value key=value".
std::map<std::string, std::string> parse_header(const std::string& line,
                                                const std::string& magic,
                                                const std::string& where) {
  const std::vector<std::string> parts = split_whitespace(line);
  if (parts.size() < 2 || parts[0] != "#" + magic || parts[1] != "v1") {
    throw DataError(where + ": missing '#" + magic + " v1' header");
  }
  std::map<std::string, std::string> fields;
  for (std::size_t i = 2; i < parts.size(); ++i) {
    const std::size_t eq = parts[i].find('=');
    if (eq == std::string::npos) {
      throw DataError(where + ": malformed header field '" + parts[i] + "'");
    }
    fields[parts[i].substr(0, eq)] = parts[i].substr(eq + 1);
  }
  return fields;
}

const std::string& header_field(const std::map<std::string, std::string>& h,
                                const std::string& key,
                                const std::string& where) {
  auto it = h.find(key);
  if (it == h.end()) throw DataError(where + ": header lacks " + key + "=");
  return it->second;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

void check_field(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_of(" \t\n\r") != std::string::npos) {
    throw DataError(what + " '" + s + "' must be non-empty without whitespace");
  }
}

}  // namespace

int last_bio_repairs() { return g_bio_repairs; }

// ---------------------------------------------------------------------------
// Text corpus

Corpus read_text_corpus(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  struct Record {
    std::string id, text, label;
    std::optional<std::string> gold;
    std::optional<bool> is_error;
  };
  std::vector<Record> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!j.is_object()) throw DataError(where + ": record is not an object");
    Record r;
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      if (key == "is_error") {
        if (!it->is_boolean()) throw DataError(where + ": is_error not a bool");
        r.is_error = it->get<bool>();
        continue;
      }
      if (key != "id" && key != "text" && key != "label" &&
          key != "gold_label") {
        throw DataError(where + ": unknown field '" + key + "'");
      }
      if (!it->is_string()) {
        throw DataError(where + ": field '" + key + "' must be a string");
      }
      const std::string value = it->get<std::string>();
      if (key == "id") r.id = value;
      if (key == "text") r.text = value;
      if (key == "label") r.label = value;
      if (key == "gold_label") r.gold = value;
    }
    if (r.id.empty()) throw DataError(where + ": missing id");
    if (r.label.empty()) throw DataError(where + ": missing label");
    records.push_back(std::move(r));
  }
  if (records.empty()) throw DataError(path.string() + ": no records");

  std::set<std::string> labels;
  for (const Record& r : records) {
    labels.insert(r.label);
    if (r.gold) labels.insert(*r.gold);
  }
  Corpus corpus;
  corpus.task = Task::kText;
  corpus.classes.assign(labels.begin(), labels.end());
  corpus.provenance = path.string();
  for (Record& r : records) {
    Document doc;
    doc.id = r.id;
    doc.tokens = split_whitespace(r.text);
    doc.text = std::move(r.text);
    Annotation a;
    a.label = corpus.class_index(r.label);
    if (r.gold) a.gold_label = corpus.class_index(*r.gold);
    a.is_error = r.is_error;
    doc.annotations.push_back(a);
    corpus.documents.push_back(std::move(doc));
  }
  corpus.validate();
  return corpus;
}

namespace {

void write_text_corpus(const Corpus& corpus,
                       const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  for (const Document& doc : corpus.documents) {
    const Annotation& a = doc.annotations.at(0);
    json j;
    j["id"] = doc.id;
    j["text"] = doc.text;
    j["label"] = corpus.classes.at(a.label);
    if (a.gold_label) j["gold_label"] = corpus.classes.at(*a.gold_label);
    if (a.is_error && !a.gold_label) j["is_error"] = *a.is_error;
    out << j.dump() << '\n';
  }
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace

// ---------------------------------------------------------------------------
// Column corpus

Corpus read_column_corpus(const std::filesystem::path& path, Task task) {
  if (task == Task::kText) {
    throw ConfigError("column corpora hold token or span tasks");
  }
  std::ifstream in = open_in(path);
  struct Sentence {
    std::string id;
    std::vector<std::string> tokens, tags, gold;
  };
  std::vector<Sentence> sentences;
  Sentence current;
  std::size_t columns = 0;
  std::string pending_id;
  auto flush = [&] {
    if (current.tokens.empty()) return;
    current.id = pending_id;
    pending_id.clear();
    sentences.push_back(std::move(current));
    current = Sentence{};
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.rfind("# id = ", 0) == 0 && current.tokens.empty()) {
      pending_id = line.substr(7);
      continue;
    }
    const std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 2 && cols.size() != 3) {
      throw DataError(where + ": expected 2 or 3 tab-separated columns");
    }
    if (columns == 0) columns = cols.size();
    if (cols.size() != columns) {
      throw DataError(where + ": ragged column count (" +
                      std::to_string(cols.size()) + " vs " +
                      std::to_string(columns) + ")");
    }
    current.tokens.push_back(cols[0]);
    current.tags.push_back(cols[1]);
    if (columns == 3) current.gold.push_back(cols[2]);
  }
  flush();
  if (sentences.empty()) throw DataError(path.string() + ": no sentences");

  const std::size_t width = std::max<std::size_t>(
      6, std::to_string(sentences.size()).size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (sentences[i].id.empty()) {
      std::string num = std::to_string(i + 1);
      sentences[i].id = "s" + std::string(width - num.size(), '0') + num;
    }
  }

  Corpus corpus;
  corpus.task = task;
  corpus.provenance = path.string();
  g_bio_repairs = 0;

  if (task == Task::kToken) {
    std::set<std::string> labels;
    for (const Sentence& s : sentences) {
      labels.insert(s.tags.begin(), s.tags.end());
      labels.insert(s.gold.begin(), s.gold.end());
    }
    corpus.classes.assign(labels.begin(), labels.end());
    for (Sentence& s : sentences) {
      Document doc;
      doc.id = s.id;
      for (std::size_t t = 0; t < s.tokens.size(); ++t) {
        Annotation a;
        a.begin = static_cast<int>(t);
        a.end = a.begin + 1;
        a.label = corpus.class_index(s.tags[t]);
        if (!s.gold.empty()) a.gold_label = corpus.class_index(s.gold[t]);
        doc.annotations.push_back(a);
      }
      doc.tokens = std::move(s.tokens);
      corpus.documents.push_back(std::move(doc));
    }
  } else {
    struct Decoded {
      std::vector<TypedSpan> noisy, gold;
    };
    std::vector<Decoded> decoded;
    std::set<std::string> types;
    for (const Sentence& s : sentences) {
      Decoded d;
      try {
        BioDecodeResult r = decode_bio(s.tags);
        g_bio_repairs += r.repairs;
        d.noisy = std::move(r.spans);
        if (!s.gold.empty()) {
          BioDecodeResult g = decode_bio(s.gold);
          g_bio_repairs += g.repairs;
          d.gold = std::move(g.spans);
        }
      } catch (const DataError& e) {
        throw ValidationError(s.id, e.what());
      }
      for (const TypedSpan& t : d.noisy) types.insert(t.type);
      for (const TypedSpan& t : d.gold) types.insert(t.type);
      decoded.push_back(std::move(d));
    }
    if (g_bio_repairs > 0) {
      std::cerr << "warning: " << path.string() << ": treated "
                << g_bio_repairs << " dangling I- tag(s) as B-\n";
    }
    corpus.classes.assign(types.begin(), types.end());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      Document doc;
      doc.id = sentences[i].id;
      doc.tokens = std::move(sentences[i].tokens);
      for (const TypedSpan& t : decoded[i].noisy) {
        doc.annotations.push_back(
            Annotation{t.begin, t.end, corpus.class_index(t.type),
                       std::nullopt, std::nullopt});
      }
      if (columns == 3) {
        for (const TypedSpan& t : decoded[i].gold) {
          doc.reference.push_back(
              Annotation{t.begin, t.end, corpus.class_index(t.type),
                         std::nullopt, std::nullopt});
        }
        resolve_span_gold(doc);
      }
      corpus.documents.push_back(std::move(doc));
    }
  }
  if (corpus.classes.empty()) {
    throw DataError(path.string() + ": no labels found");
  }
  corpus.validate();
  return corpus;
}

namespace {

void write_column_corpus(const Corpus& corpus,
                         const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  bool has_gold = false;
  for (const Document& doc : corpus.documents) {
    if (!doc.reference.empty()) has_gold = true;
    for (const Annotation& a : doc.annotations) {
      if (a.gold_label || a.is_error) has_gold = true;
    }
  }
  for (const Document& doc : corpus.documents) {
    for (const std::string& tok : doc.tokens) {
      if (tok.empty() || tok.find_first_of("\t\n\r") != std::string::npos) {
        throw DataError("document '" + doc.id +
                        "': token cannot be written to a column file");
      }
    }
    std::vector<std::string> tags, gold;
    const int n = static_cast<int>(doc.tokens.size());
    if (corpus.task == Task::kToken) {
      for (const Annotation& a : doc.annotations) {
        tags.push_back(corpus.classes.at(a.label));
        gold.push_back(corpus.classes.at(a.gold_label.value_or(a.label)));
      }
    } else {
      std::vector<TypedSpan> noisy, ref;
      for (const Annotation& a : doc.annotations) {
        noisy.push_back({a.begin, a.end, corpus.classes.at(a.label)});
      }
      if (!doc.reference.empty()) {
        for (const Annotation& a : doc.reference) {
          ref.push_back({a.begin, a.end, corpus.classes.at(a.label)});
        }
      } else {
        for (const Annotation& a : doc.annotations) {
          if (a.gold_label) {
            ref.push_back({a.begin, a.end, corpus.classes.at(*a.gold_label)});
          } else if (!a.is_error.value_or(false)) {
            ref.push_back({a.begin, a.end, corpus.classes.at(a.label)});
          }
        }
      }
      tags = encode_bio(n, noisy);
      gold = encode_bio(n, ref);
    }
    out << "# id = " << doc.id << '\n';
    for (int t = 0; t < n; ++t) {
      out << doc.tokens[t] << '\t' << tags[t];
      if (has_gold) out << '\t' << gold[t];
      out << '\n';
    }
    out << '\n';
  }
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  if (corpus.task == Task::kText) {
    write_text_corpus(corpus, path);
  } else {
    write_column_corpus(corpus, path);
  }
}

Corpus read_corpus(const std::filesystem::path& path, Task task) {
  return task == Task::kText ? read_text_corpus(path)
                             : read_column_corpus(path, task);
}

// ---------------------------------------------------------------------------
// Predictions

namespace {

std::pair<BundleKind, std::size_t> parse_kind(const std::string& s,
                                              const std::string& where) {
  if (s == "single") return {BundleKind::kSingle, 1};
  const std::size_t colon = s.find(':');
  if (colon != std::string::npos) {
    const std::string head = s.substr(0, colon);
    const long n = parse_int(s.substr(colon + 1), where);
    if (n < 1) throw DataError(where + ": pass count must be positive");
    if (head == "repeated") return {BundleKind::kRepeated, std::size_t(n)};
    if (head == "epochs") return {BundleKind::kPerEpoch, std::size_t(n)};
  }
  throw DataError(where + ": unknown bundle kind '" + s + "'");
}

std::string kind_string(const PredictionBundle& b) {
  switch (b.kind()) {
    case BundleKind::kSingle:
      return "single";
    case BundleKind::kRepeated:
      return "repeated:" + std::to_string(b.depth());
    case BundleKind::kPerEpoch:
      return "epochs:" + std::to_string(b.depth());
  }
  return "?";
}

}  // namespace

PredictionBundle read_predictions(const std::filesystem::path& path,
                                  const Corpus& corpus) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty");
  strip_cr(line);
  const std::string where = path.string();
  const auto header = parse_header(line, "aed-pred", where);
  const std::string& model = header_field(header, "model", where);
  const auto [kind, depth] =
      parse_kind(header_field(header, "kind", where), where);
  const std::vector<std::string> classes =
      split(header_field(header, "classes", where), ',');
  if (classes != corpus.classes) {
    throw DataError(where + ": classes '" + join(classes, ',') +
                    "' do not match the corpus classes '" +
                    join(corpus.classes, ',') + "'");
  }

  const std::vector<Unit> units = extract_units(corpus);
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> uids;
  for (std::size_t i = 0; i < units.size(); ++i) {
    index.emplace(units[i].uid, i);
    uids.push_back(units[i].uid);
  }
  PredictionBundle bundle(model, classes, kind, depth, uids);
  std::vector<std::size_t> seen(units.size() * depth, 0);
  const std::size_t n_classes = classes.size();
  const std::size_t lead = kind == BundleKind::kSingle ? 1 : 2;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string at = where + ":" + std::to_string(line_no);
    const std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != lead + n_classes) {
      throw DataError(at + ": expected " + std::to_string(lead + n_classes) +
                      " columns");
    }
    auto it = index.find(cols[0]);
    if (it == index.end()) {
      throw DataError(at + ": uid '" + cols[0] + "' is not in the corpus");
    }
    std::size_t pass = 0;
    if (lead == 2) {
      const long p = parse_int(cols[1], at);
      if (p < 0 || static_cast<std::size_t>(p) >= depth) {
        throw DataError(at + ": pass index out of range");
      }
      pass = static_cast<std::size_t>(p);
    }
    if (seen[it->second * depth + pass]++) {
      throw DataError(at + ": duplicate row for " + cols[0]);
    }
    std::span<double> row = bundle.row(it->second, pass);
    double sum = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
      row[c] = parse_double(cols[lead + c], at);
      if (row[c] < 0.0) throw DataError(at + ": negative probability");
      sum += row[c];
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw DataError(at + ": probabilities sum to " + format_double(sum) +
                      ", not 1 within 1e-6");
    }
    for (double& p : row) p /= sum;
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    for (std::size_t t = 0; t < depth; ++t) {
      if (!seen[i * depth + t]) {
        throw DataError(where + ": no prediction for uid '" + units[i].uid +
                        "'" + (depth > 1 ? " pass " + std::to_string(t) : ""));
      }
    }
  }
  return bundle;
}

void write_predictions(const PredictionBundle& bundle,
                       const std::filesystem::path& path) {
  check_field(bundle.model_name(), "model name");
  for (const std::string& c : bundle.classes()) {
    check_field(c, "class");
    if (c.find(',') != std::string::npos) {
      throw DataError("class '" + c + "' contains a comma");
    }
  }
  std::ofstream out = open_out(path);
  out << "#aed-pred v1 model=" << bundle.model_name()
      << " kind=" << kind_string(bundle)
      << " classes=" << join(bundle.classes(), ',') << '\n';
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    for (std::size_t t = 0; t < bundle.depth(); ++t) {
      out << bundle.uids()[i];
      if (bundle.kind() != BundleKind::kSingle) out << '\t' << t;
      for (double p : bundle.row(i, t)) out << '\t' << format_double(p);
      out << '\n';
    }
  }
  if (!out) throw DataError("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Embeddings

EmbeddingSet read_embeddings(const std::filesystem::path& path,
                             const Corpus& corpus) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty");
  strip_cr(line);
  const std::string where = path.string();
  const auto header = parse_header(line, "aed-emb", where);
  EmbeddingSet set;
  set.name = header_field(header, "name", where);
  const long dim = parse_int(header_field(header, "dim", where), where);
  if (dim < 1) throw DataError(where + ": dim must be positive");
  set.dim = static_cast<std::size_t>(dim);

  const std::vector<Unit> units = extract_units(corpus);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < units.size(); ++i) {
    index.emplace(units[i].uid, i);
    set.uids.push_back(units[i].uid);
  }
  set.data.assign(units.size() * set.dim, 0.0);
  std::vector<char> seen(units.size(), 0);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const std::string at = where + ":" + std::to_string(line_no);
    const std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != set.dim + 1) {
      throw DataError(at + ": dimension mismatch, expected " +
                      std::to_string(set.dim) + " values");
    }
    auto it = index.find(cols[0]);
    if (it == index.end()) {
      throw DataError(at + ": uid '" + cols[0] + "' is not in the corpus");
    }
    if (seen[it->second]++) {
      throw DataError(at + ": duplicate uid '" + cols[0] + "'");
    }
    std::span<double> row = set.row(it->second);
    for (std::size_t k = 0; k < set.dim; ++k) {
      row[k] = parse_double(cols[k + 1], at);
    }
  }
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!seen[i]) {
      throw DataError(where + ": missing embedding for uid '" + units[i].uid +
                      "'");
    }
  }
  return set;
}

void write_embeddings(const EmbeddingSet& embeddings,
                      const std::filesystem::path& path) {
  check_field(embeddings.name, "embedding name");
  std::ofstream out = open_out(path);
  out << "#aed-emb v1 name=" << embeddings.name << " dim=" << embeddings.dim
      << '\n';
  for (std::size_t i = 0; i < embeddings.uids.size(); ++i) {
    out << embeddings.uids[i];
    for (double x : embeddings.row(i)) out << '\t' << format_double(x);
    out << '\n';
  }
  if (!out) throw DataError("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Folds

void write_folds(const FoldAssignment& folds,
                 const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "#aed-folds v1 k=" << folds.k << '\n';
  for (const auto& [doc, fold] : folds.fold_of_doc) {
    out << doc << '\t' << fold << '\n';
  }
  if (!out) throw DataError("failed writing " + path.string());
}

FoldAssignment read_folds(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty");
  strip_cr(line);
  const auto header = parse_header(line, "aed-folds", path.string());
  FoldAssignment folds;
  folds.k = static_cast<int>(
      parse_int(header_field(header, "k", path.string()), path.string()));
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 2) throw DataError(path.string() + ": malformed row");
    const long f = parse_int(cols[1], path.string());
    if (f < 0 || f >= folds.k) {
      throw DataError(path.string() + ": fold index out of range");
    }
    folds.fold_of_doc[cols[0]] = static_cast<int>(f);
  }
  return folds;
}

}  // namespace aed
