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

#include "aed/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "aed/calibrate.hpp"
#include "aed/error.hpp"
#include "aed/eval.hpp"
#include "aed/io.hpp"
#include "aed/irt.hpp"
#include "aed/models.hpp"

namespace fs = std::filesystem;

namespace aed {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T, typename Name>
std::string join(const std::vector<T>& items, Name name) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += name(items[i]);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return x;
}

std::string aggregation_name(Aggregation a) {
  switch (a) {
    case Aggregation::kMean:
      return "mean";
    case Aggregation::kMin:
      return "min";
    case Aggregation::kMax:
      return "max";
    case Aggregation::kMedian:
      return "median";
  }
  return "mean";
}

std::string task_long_name(Task t) {
  switch (t) {
    case Task::kText:
      return "text classification";
    case Task::kToken:
      return "token labeling";
    case Task::kSpan:
      return "span labeling";
  }
  return "?";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DataError("cannot write " + p.string());
  out << text;
}

void require_file(const fs::path& p, std::string_view stage) {
  if (!fs::exists(p)) {
    throw DataError(std::string(stage) + " stage: missing input " +
                    p.string());
  }
}

bool contains(const std::vector<Method>& ms, Method m) {
  return std::find(ms.begin(), ms.end(), m) != ms.end();
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

std::vector<Method> default_borda_members(Task task) {
  if (task == Task::kText) return {Method::kCU, Method::kDM, Method::kCS};
  return {Method::kCU, Method::kLE, Method::kWD};
}

std::vector<Method> RunConfig::effective_methods() const {
  if (!methods.empty()) return methods;
  std::vector<Method> out;
  for (Method m : all_methods()) {
    if (applies_to(m, task)) out.push_back(m);
  }
  return out;
}

std::vector<FeatureFamily> RunConfig::effective_models() const {
  return models.empty() ? default_families(task) : models;
}

std::vector<Method> RunConfig::effective_borda() const {
  return borda.empty() ? default_borda_members(task) : borda;
}

std::string RunConfig::effective_dataset() const {
  if (!dataset.empty()) return dataset;
  if (!input.empty()) return input.stem().string();
  return "corpus";
}

void RunConfig::validate() const {
  const std::vector<Method> ms = effective_methods();
  for (Method m : ms) {
    if (!applies_to(m, task)) {
      throw ConfigError("method " + std::string(method_code(m)) +
                        " is not applicable to " + task_long_name(task) +
                        " (see the method/task applicability table)");
    }
  }
  if (contains(ms, Method::kBC)) {
    for (Method m : effective_borda()) {
      if (m == Method::kBC || !is_scorer(m) || !applies_to(m, task)) {
        throw ConfigError("BC member " + std::string(method_code(m)) +
                          " must be a scorer applicable to " +
                          task_long_name(task));
      }
    }
  }
  for (FeatureFamily f : effective_models()) {
    BaselineSpec spec;
    spec.family = f;
    spec.epochs = epochs;
    spec.learning_rate = learning_rate;
    spec.l2 = l2;
    spec.hash_bits = hash_bits;
    spec.validate(task);
  }
  if ((contains(ms, Method::kDE) || contains(ms, Method::kIRT)) &&
      effective_models().size() < 2) {
    throw ConfigError("DE and IRT need at least 2 models");
  }
  if (folds < 2) throw ConfigError("folds must be at least 2");
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw ConfigError("rate must lie in [0, 1]");
  }
  if (dropout_passes < 2) throw ConfigError("dropout passes must be >= 2");
  if (!(dropout_rate > 0.0 && dropout_rate < 1.0)) {
    throw ConfigError("dropout rate must lie in (0, 1)");
  }
  if (projection_members < 2) {
    throw ConfigError("projection members must be >= 2");
  }
  if (projection_dim == 0 || embed_dim == 0 || knn_k == 0) {
    throw ConfigError("dimensions and k must be positive");
  }
}

std::string RunConfig::to_text() const {
  std::ostringstream o;
  o << "task = " << task_name(task) << "\n"
    << "input = " << input.string() << "\n"
    << "out = " << out.string() << "\n"
    << "dataset = " << dataset << "\n"
    << "methods = " << join(methods, method_code) << "\n"
    << "models = " << join(models, family_name) << "\n"
    << "folds = " << folds << "\n"
    << "seed = " << seed << "\n"
    << "rate = " << format_double(rate) << "\n"
    << "calibrate = " << (calibrate ? "true" : "false") << "\n"
    << "cv = " << (cross_validate ? "true" : "false") << "\n"
    << "predictions = " << predictions.string() << "\n"
    << "embeddings = " << embeddings.string() << "\n"
    << "epochs = " << epochs << "\n"
    << "learning_rate = " << format_double(learning_rate) << "\n"
    << "l2 = " << format_double(l2) << "\n"
    << "hash_bits = " << hash_bits << "\n"
    << "aggregation = " << aggregation_name(aggregation) << "\n"
    << "dropout_passes = " << dropout_passes << "\n"
    << "dropout_rate = " << format_double(dropout_rate) << "\n"
    << "projection_members = " << projection_members << "\n"
    << "projection_dim = " << projection_dim << "\n"
    << "embed_dim = " << embed_dim << "\n"
    << "knn_k = " << knn_k << "\n"
    << "knn_include_self = " << (knn_include_self ? "true" : "false") << "\n"
    << "borda = " << join(borda, method_code) << "\n"
    << "borda_top = " << borda_top << "\n";
  return o.str();
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  auto nonneg = [&](long long x) {
    if (x < 0) throw ConfigError(key + " must not be negative");
    return x;
  };
  if (key == "task") {
    task = parse_task(v);
  } else if (key == "input") {
    input = v;
  } else if (key == "out") {
    out = v;
  } else if (key == "dataset") {
    dataset = v;
  } else if (key == "methods") {
    methods.clear();
    for (const std::string& m : split_list(v)) methods.push_back(parse_method(m));
  } else if (key == "models") {
    models.clear();
    for (const std::string& m : split_list(v)) models.push_back(parse_family(m));
  } else if (key == "folds") {
    folds = static_cast<int>(parse_int(key, v));
  } else if (key == "seed") {
    seed = static_cast<std::uint64_t>(nonneg(parse_int(key, v)));
  } else if (key == "rate") {
    rate = parse_double(key, v);
  } else if (key == "calibrate") {
    calibrate = parse_bool(key, v);
  } else if (key == "cv") {
    cross_validate = parse_bool(key, v);
  } else if (key == "predictions") {
    predictions = v;
  } else if (key == "embeddings") {
    embeddings = v;
  } else if (key == "epochs") {
    epochs = static_cast<int>(parse_int(key, v));
  } else if (key == "learning_rate") {
    learning_rate = parse_double(key, v);
  } else if (key == "l2") {
    l2 = parse_double(key, v);
  } else if (key == "hash_bits") {
    hash_bits = static_cast<int>(parse_int(key, v));
  } else if (key == "aggregation") {
    aggregation = parse_aggregation(v);
  } else if (key == "dropout_passes") {
    dropout_passes = static_cast<int>(parse_int(key, v));
  } else if (key == "dropout_rate") {
    dropout_rate = parse_double(key, v);
  } else if (key == "projection_members") {
    projection_members = static_cast<int>(parse_int(key, v));
  } else if (key == "projection_dim") {
    projection_dim = static_cast<std::size_t>(nonneg(parse_int(key, v)));
  } else if (key == "embed_dim") {
    embed_dim = static_cast<std::size_t>(nonneg(parse_int(key, v)));
  } else if (key == "knn_k") {
    knn_k = static_cast<std::size_t>(nonneg(parse_int(key, v)));
  } else if (key == "knn_include_self") {
    knn_include_self = parse_bool(key, v);
  } else if (key == "borda") {
    borda.clear();
    for (const std::string& m : split_list(v)) borda.push_back(parse_method(m));
  } else if (key == "borda_top") {
    borda_top = static_cast<std::size_t>(nonneg(parse_int(key, v)));
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(n) +
                        ": expected key = value");
    }
    c.set(trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return RunConfig::from_text(ss.str());
}

void save_config(const RunConfig& config, const fs::path& path) {
  write_file(path, config.to_text());
}

// ---------------------------------------------------------------------------
// Traces

void write_trace(const std::vector<std::string>& uids,
                 const std::vector<std::vector<double>>& rows,
                 const std::string& kind, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "#aed-trace v1 kind=" << kind << "\n";
  for (std::size_t i = 0; i < uids.size(); ++i) {
    out << uids[i];
    for (double v : rows[i]) out << '\t' << format_double(v);
    out << '\n';
  }
}

std::vector<std::vector<double>> read_trace(const fs::path& path,
                                            std::span<const Unit> units,
                                            const std::string& kind) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      line != "#aed-trace v1 kind=" + kind) {
    throw DataError(path.string() + ": expected a " + kind + " trace");
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string uid, cell;
    std::getline(ls, uid, '\t');
    if (rows.size() >= units.size() || units[rows.size()].uid != uid) {
      throw DataError(path.string() + ": unexpected uid '" + uid + "'");
    }
    std::vector<double> row;
    while (std::getline(ls, cell, '\t')) row.push_back(parse_double(uid, cell));
    rows.push_back(std::move(row));
  }
  if (rows.size() != units.size()) {
    throw DataError(path.string() + ": trace does not cover the corpus");
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Stages

std::string_view stage_name(Stage stage) {
  switch (stage) {
    case Stage::kIngest:
      return "ingest";
    case Stage::kCorrupt:
      return "corrupt";
    case Stage::kTrain:
      return "train";
    case Stage::kCalibrate:
      return "calibrate";
    case Stage::kDetect:
      return "detect";
    case Stage::kEvaluate:
      return "evaluate";
    case Stage::kReport:
      return "report";
  }
  return "?";
}

std::vector<Stage> all_stages() {
  return {Stage::kIngest, Stage::kCorrupt,  Stage::kTrain, Stage::kCalibrate,
          Stage::kDetect, Stage::kEvaluate, Stage::kReport};
}

namespace {

std::string corpus_extension(Task task) {
  return task == Task::kText ? ".jsonl" : ".conll";
}

// Artifacts the requested methods depend on.
struct Needs {
  bool single = false;
  bool repeated = false;
  bool epochs = false;
  bool curriculum = false;
  bool leitner = false;
  bool members = false;
  bool embeddings = false;
  bool projection = false;
};

Needs needs_of(const RunConfig& c) {
  std::vector<Method> ms = c.effective_methods();
  if (contains(ms, Method::kBC)) {
    const std::vector<Method> b = c.effective_borda();
    ms.insert(ms.end(), b.begin(), b.end());
  }
  Needs n;
  for (Method m : ms) {
    switch (m) {
      case Method::kRE:
      case Method::kCL:
      case Method::kCU:
      case Method::kPM:
        n.single = true;
        break;
      case Method::kDU:
      case Method::kLA:
        n.repeated = true;
        break;
      case Method::kDM:
        n.epochs = true;
        break;
      case Method::kCS:
        n.curriculum = true;
        break;
      case Method::kLS:
        n.leitner = true;
        break;
      case Method::kDE:
      case Method::kIRT:
        n.members = true;
        break;
      case Method::kMD:
      case Method::kKNN:
        n.embeddings = true;
        break;
      case Method::kPE:
        n.embeddings = true;
        n.projection = true;
        break;
      default:
        break;
    }
  }
  return n;
}

BaselineSpec spec_for(const RunConfig& c, FeatureFamily family) {
  BaselineSpec s;
  s.family = family;
  s.epochs = c.epochs;
  s.learning_rate = c.learning_rate;
  s.l2 = c.l2;
  s.seed = c.seed;
  s.hash_bits = c.hash_bits;
  s.aggregation = c.aggregation;
  return s;
}

}  // namespace

Pipeline::Pipeline(RunConfig config, std::ostream& log, bool force)
    : config_(std::move(config)), log_(log), force_(force) {
  config_.validate();
}

fs::path Pipeline::clean_corpus_path() const {
  return config_.out / ("corpus" + corpus_extension(config_.task));
}

fs::path Pipeline::working_corpus_path() const {
  return config_.rate > 0.0
             ? config_.out / ("noisy" + corpus_extension(config_.task))
             : clean_corpus_path();
}

fs::path Pipeline::folds_path() const { return config_.out / "folds.tsv"; }
fs::path Pipeline::report_tsv_path() const {
  return config_.out / "report.tsv";
}
fs::path Pipeline::report_json_path() const {
  return config_.out / "report.json";
}

std::vector<fs::path> Pipeline::stage_inputs(Stage stage) const {
  const fs::path& o = config_.out;
  auto dir_files = [](const fs::path& d) {
    std::vector<fs::path> out;
    if (fs::is_directory(d)) {
      for (const auto& e : fs::directory_iterator(d)) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<fs::path> in;
  switch (stage) {
    case Stage::kIngest:
      in = {config_.input};
      break;
    case Stage::kCorrupt:
      in = {clean_corpus_path()};
      break;
    case Stage::kTrain:
      in = {working_corpus_path(), folds_path()};
      if (!config_.predictions.empty()) in.push_back(config_.predictions);
      if (!config_.embeddings.empty()) in.push_back(config_.embeddings);
      break;
    case Stage::kCalibrate:
      in = dir_files(o / "pred");
      in.push_back(working_corpus_path());
      break;
    case Stage::kDetect: {
      in = {working_corpus_path()};
      for (const char* d : {"pred", "emb", "traces"}) {
        for (const fs::path& p : dir_files(o / d)) in.push_back(p);
      }
      break;
    }
    case Stage::kEvaluate:
      in = dir_files(o / "detect");
      in.push_back(working_corpus_path());
      break;
    case Stage::kReport:
      in = {o / "eval.json"};
      break;
  }
  return in;
}

std::string Pipeline::stage_key(Stage stage) const {
  std::string material = config_.to_text();
  material += "stage=" + std::string(stage_name(stage)) + "\n";
  for (const fs::path& p : stage_inputs(stage)) {
    material += p.string() + "=";
    if (fs::is_regular_file(p)) {
      material += std::to_string(fnv1a(read_file(p)));
    } else {
      material += "missing";
    }
    material += "\n";
  }
  std::ostringstream hex;
  hex << std::hex << fnv1a(material);
  return hex.str();
}

bool Pipeline::run(Stage stage) {
  fs::create_directories(config_.out / ".stamps");
  const fs::path stamp = config_.out / ".stamps" / std::string(stage_name(stage));
  const std::string key = stage_key(stage);
  if (!force_ && fs::exists(stamp) && read_file(stamp) == key) {
    log_ << "[" << stage_name(stage) << "] up to date\n";
    return false;
  }
  log_ << "[" << stage_name(stage) << "] running\n";
  switch (stage) {
    case Stage::kIngest:
      ingest();
      break;
    case Stage::kCorrupt:
      corrupt();
      break;
    case Stage::kTrain:
      train();
      break;
    case Stage::kCalibrate:
      calibrate();
      break;
    case Stage::kDetect:
      detect();
      break;
    case Stage::kEvaluate:
      evaluate();
      break;
    case Stage::kReport:
      report();
      break;
  }
  // Inputs of later stages may have changed; recompute after running.
  write_file(stamp, stage_key(stage));
  return true;
}

void Pipeline::run_all() {
  for (Stage s : all_stages()) run(s);
}

void Pipeline::ingest() {
  if (config_.input.empty()) {
    throw ConfigError("ingest needs an input corpus (--in)");
  }
  require_file(config_.input, "ingest");
  Corpus corpus = read_corpus(config_.input, config_.task);
  corpus.validate();
  if (corpus.provenance.empty()) corpus.provenance = config_.input.string();
  write_corpus(corpus, clean_corpus_path());
  const std::size_t n_units = extract_units(corpus).size();
  log_ << "  " << corpus.documents.size() << " documents, " << n_units
       << " units, " << corpus.classes.size() << " classes\n";
  if (static_cast<std::size_t>(config_.folds) <= corpus.documents.size()) {
    write_folds(make_folds(corpus, config_.folds, config_.seed), folds_path());
  } else if (config_.cross_validate) {
    throw ConfigError("fold count exceeds the number of documents");
  }
}

void Pipeline::corrupt() {
  if (config_.rate <= 0.0) {
    log_ << "  rate is 0, nothing to corrupt\n";
    return;
  }
  require_file(clean_corpus_path(), "corrupt");
  const Corpus clean = read_corpus(clean_corpus_path(), config_.task);
  const Corpus noisy = inject_noise(clean, config_.rate, config_.seed);
  write_corpus(noisy, working_corpus_path());
  std::size_t flipped = 0;
  for (const Unit& u : extract_units(noisy)) flipped += u.is_error.value_or(false);
  log_ << "  flipped " << flipped << " labels\n";
}

void Pipeline::train() {
  require_file(working_corpus_path(), "train");
  const Corpus corpus = read_corpus(working_corpus_path(), config_.task);
  const std::vector<Unit> units = extract_units(corpus);
  std::optional<FoldAssignment> folds;
  if (config_.cross_validate) {
    require_file(folds_path(), "train");
    folds = read_folds(folds_path());
  }
  const Needs need = needs_of(config_);
  const fs::path pred = config_.out / "pred";
  fs::remove_all(pred);
  fs::remove_all(config_.out / "emb");
  fs::remove_all(config_.out / "traces");
  fs::create_directories(pred);

  const std::vector<FeatureFamily> families = config_.effective_models();
  const BaselineSpec primary = spec_for(config_, families[0]);
  std::optional<CrossValidatedModel> model;
  auto primary_model = [&]() -> const CrossValidatedModel& {
    if (!model) {
      if (folds) {
        model.emplace(corpus, primary, *folds);
      } else {
        model.emplace(corpus, primary);
      }
    }
    return *model;
  };

  if (need.single) {
    PredictionBundle single;
    if (!config_.predictions.empty()) {
      single = read_predictions(config_.predictions, corpus);
      if (single.kind() != BundleKind::kSingle) {
        throw DataError(config_.predictions.string() +
                        ": expected a single prediction bundle");
      }
    } else {
      single = primary_model().predict();
    }
    write_predictions(single, pred / "single.tsv");
    log_ << "  single predictions from " << single.model_name() << "\n";
  }
  if (need.repeated) {
    write_predictions(primary_model().predict_mc_dropout(
                          config_.dropout_passes, config_.dropout_rate,
                          mix_seed(config_.seed, 0xD50)),
                      pred / "repeated.tsv");
  }
  if (need.epochs) {
    const EpochRecord rec =
        record_epoch_probs(corpus, primary, Schedule::kPlain, folds);
    write_predictions(rec.bundle, pred / "epochs.tsv");
  }
  if (need.curriculum || need.leitner) {
    fs::create_directories(config_.out / "traces");
  }
  std::vector<std::string> uids;
  for (const Unit& u : units) uids.push_back(u.uid);
  if (need.curriculum) {
    const EpochRecord rec =
        record_epoch_probs(corpus, primary, Schedule::kCurriculum, {});
    write_trace(uids, rec.losses, "losses",
                config_.out / "traces" / "curriculum.tsv");
  }
  if (need.leitner) {
    const EpochRecord rec =
        record_epoch_probs(corpus, primary, Schedule::kLeitner, {});
    std::vector<std::vector<double>> decks;
    for (const auto& d : rec.decks) decks.emplace_back(d.begin(), d.end());
    write_trace(uids, decks, "decks", config_.out / "traces" / "leitner.tsv");
  }
  if (need.members) {
    for (std::size_t m = 0; m < families.size(); ++m) {
      const BaselineSpec spec = spec_for(config_, families[m]);
      PredictionBundle b =
          m == 0 ? primary_model().predict()
                 : (folds ? CrossValidatedModel(corpus, spec, *folds)
                          : CrossValidatedModel(corpus, spec))
                       .predict();
      write_predictions(b, pred / ("member-" + std::to_string(m) + ".tsv"));
    }
  }
  if (need.embeddings) {
    fs::create_directories(config_.out / "emb");
    const EmbeddingSet emb =
        config_.embeddings.empty()
            ? builtin_embed(corpus, config_.embed_dim, config_.seed)
            : read_embeddings(config_.embeddings, corpus);
    write_embeddings(emb, config_.out / "emb" / "embeddings.tsv");
    if (need.projection) {
      const std::size_t dim = std::min(config_.projection_dim, emb.dim);
      const std::vector<PredictionBundle> members =
          gaussian_projection_ensemble(corpus, emb,
                                       config_.projection_members, dim,
                                       folds ? &*folds : nullptr, primary);
      for (std::size_t j = 0; j < members.size(); ++j) {
        write_predictions(members[j],
                          pred / ("projection-" + std::to_string(j) + ".tsv"));
      }
    }
  }
}

void Pipeline::calibrate() {
  const fs::path pred = config_.out / "pred";
  for (const char* name : {"single.platt.tsv", "repeated.platt.tsv"}) {
    fs::remove(pred / name);
  }
  if (!config_.calibrate) {
    log_ << "  calibration off\n";
    return;
  }
  require_file(working_corpus_path(), "calibrate");
  const Corpus corpus = read_corpus(working_corpus_path(), config_.task);
  const std::vector<Unit> units = extract_units(corpus);
  for (const char* name : {"single", "repeated"}) {
    const fs::path in = pred / (std::string(name) + ".tsv");
    if (!fs::exists(in)) continue;
    const PredictionBundle b = read_predictions(in, corpus);
    write_predictions(calibrate_bundle(b, units),
                      pred / (std::string(name) + ".platt.tsv"));
  }
}

void Pipeline::detect() {
  require_file(working_corpus_path(), "detect");
  const Corpus corpus = read_corpus(working_corpus_path(), config_.task);
  const std::vector<Unit> units = extract_units(corpus);
  const fs::path pred = config_.out / "pred";
  const fs::path out = config_.out / "detect";
  fs::remove_all(out);
  fs::create_directories(out);

  std::map<std::string, PredictionBundle> cache;
  auto bundle = [&](const std::string& name) -> const PredictionBundle& {
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    const fs::path p = pred / (name + ".tsv");
    require_file(p, "detect");
    return cache.emplace(name, read_predictions(p, corpus)).first->second;
  };
  auto calibrated = [&](const std::string& name) -> const PredictionBundle& {
    return bundle(config_.calibrate ? name + ".platt" : name);
  };
  auto numbered = [&](const std::string& prefix) {
    std::vector<PredictionBundle> out;
    for (std::size_t i = 0;; ++i) {
      const fs::path p = pred / (prefix + std::to_string(i) + ".tsv");
      if (!fs::exists(p)) break;
      out.push_back(read_predictions(p, corpus));
    }
    if (out.empty()) {
      throw DataError("detect stage: no " + prefix + "* prediction files");
    }
    return out;
  };
  std::optional<EmbeddingSet> emb;
  auto embeddings = [&]() -> const EmbeddingSet& {
    if (!emb) {
      const fs::path p = config_.out / "emb" / "embeddings.tsv";
      require_file(p, "detect");
      emb = read_embeddings(p, corpus);
    }
    return *emb;
  };
  const std::size_t C = corpus.classes.size();

  std::map<Method, ScoreVector> scores;
  auto score = [&](Method m) -> const ScoreVector& {
    auto it = scores.find(m);
    if (it != scores.end()) return it->second;
    ScoreVector s;
    switch (m) {
      case Method::kCU:
        s = classification_uncertainty(calibrated("single"), units);
        break;
      case Method::kPM:
        s = prediction_margin(calibrated("single"), units);
        break;
      case Method::kDU:
        s = dropout_uncertainty(calibrated("repeated"), units);
        break;
      case Method::kDM:
        s = datamap_confidence(bundle("epochs"), units);
        break;
      case Method::kCS: {
        EpochRecord rec;
        rec.losses = read_trace(config_.out / "traces" / "curriculum.tsv",
                                units, "losses");
        s = curriculum_spotter(rec, units);
        break;
      }
      case Method::kLS: {
        EpochRecord rec;
        for (const auto& row : read_trace(
                 config_.out / "traces" / "leitner.tsv", units, "decks")) {
          rec.decks.emplace_back(row.begin(), row.end());
        }
        s = leitner_spotter(rec, units);
        break;
      }
      case Method::kLE:
        s = label_entropy(corpus, units);
        break;
      case Method::kWD:
        s = weighted_discrepancy(corpus, units);
        break;
      case Method::kMD:
        s = mean_distance(embeddings(), units, C);
        break;
      case Method::kKNN:
        s = knn_entropy(embeddings(), units, C,
                        KnnOptions{config_.knn_k, config_.knn_include_self});
        break;
      case Method::kBC: {
        std::vector<ScoreVector> members;
        for (Method b : config_.effective_borda()) {
          members.push_back(scores.count(b) ? scores.at(b) : ScoreVector{});
        }
        s = borda_count(members, config_.borda_top);
        break;
      }
      default:
        throw Error("not a scorer");
    }
    return scores.emplace(m, std::move(s)).first->second;
  };

  const std::vector<Method> methods = config_.effective_methods();
  if (contains(methods, Method::kBC)) {
    for (Method b : config_.effective_borda()) score(b);
  }
  for (Method m : methods) {
    const fs::path file = out / (std::string(method_code(m)) + ".tsv");
    if (is_scorer(m)) {
      write_scores(score(m), file);
      continue;
    }
    FlagVector f;
    switch (m) {
      case Method::kRE:
        f = retag(bundle("single"), units);
        break;
      case Method::kCL:
        f = confident_learning(calibrated("single"), units);
        break;
      case Method::kLA:
        f = label_aggregation(bundle("repeated"), units);
        break;
      case Method::kDE:
        f = diverse_ensemble(numbered("member-"), units);
        break;
      case Method::kPE:
        f = projection_ensemble(numbered("projection-"), units);
        break;
      case Method::kIRT: {
        const std::vector<PredictionBundle> members = numbered("member-");
        const IrtFit fit = fit_irt_2pl(response_matrix(members, units),
                                       IrtOptions{2000, 0.05, config_.seed});
        if (fit.degenerate) {
          log_ << "  warning: IRT responses are all equal; fit stays at "
                  "the prior\n";
        }
        f = irt_flag(fit, units);
        break;
      }
      case Method::kVN:
        f = variation_ngrams(corpus, units);
        break;
      default:
        throw Error("not a flagger");
    }
    write_flags(f, file);
  }
  log_ << "  wrote " << methods.size() << " detector outputs\n";
}

void Pipeline::evaluate() {
  require_file(working_corpus_path(), "evaluate");
  const Corpus corpus = read_corpus(working_corpus_path(), config_.task);
  const std::vector<Unit> units = extract_units(corpus);
  std::vector<EvalReport> reports;
  for (Method m : config_.effective_methods()) {
    const fs::path file =
        config_.out / "detect" / (std::string(method_code(m)) + ".tsv");
    require_file(file, "evaluate");
    EvalReport r = is_scorer(m) ? eval_scorer(read_scores(file, units), units)
                                : eval_flagger(read_flags(file, units), units);
    r.dataset = config_.effective_dataset();
    r.task = std::string(task_name(config_.task));
    reports.push_back(std::move(r));
  }
  write_file(config_.out / "eval.json", report_json(reports));
}

void Pipeline::report() {
  const fs::path eval = config_.out / "eval.json";
  require_file(eval, "report");
  const std::vector<EvalReport> reports = parse_report_json(read_file(eval));
  write_report(reports, report_tsv_path(), report_json_path());
  std::ostringstream s;
  s << "dataset " << config_.effective_dataset() << " ("
    << task_long_name(config_.task) << ")\n";
  if (!reports.empty()) {
    s << reports[0].n_units << " units, " << reports[0].n_errors
      << " known errors\n\n";
  }
  char line[160];
  std::snprintf(line, sizeof(line), "%-6s %-8s %9s %9s %9s %9s\n", "method",
                "kind", "P / AP", "R / P@10", "F1 / R@10", "flagged");
  s << line;
  for (const EvalReport& r : reports) {
    if (r.flagger) {
      std::snprintf(line, sizeof(line), "%-6s %-8s %9.4f %9.4f %9.4f %8.2f%%\n",
                    r.method.c_str(), "flagger", r.flagger->precision,
                    r.flagger->recall, r.flagger->f1,
                    100.0 * r.flagger->pct_flagged);
    } else {
      char ap[32] = "NA";
      if (r.scorer->average_precision) {
        std::snprintf(ap, sizeof(ap), "%.4f", *r.scorer->average_precision);
      }
      std::snprintf(line, sizeof(line), "%-6s %-8s %9s %9.4f %9.4f %9s\n",
                    r.method.c_str(), "scorer", ap, r.scorer->precision_at_10,
                    r.scorer->recall_at_10, "");
    }
    s << line;
  }
  write_file(config_.out / "summary.txt", s.str());
  log_ << s.str();
}

}  // namespace aed
