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

// aed: command-line front end of the annotation error detection pipeline.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "aed/error.hpp"
#include "aed/io.hpp"
#include "aed/pipeline.hpp"
#include "aed/synth.hpp"

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string task, in, out, seed, folds, rate, methods, models, predictions,
      embeddings, config;
  std::vector<std::string> sets;
  bool no_cv = false;
  bool calibrate = false;
  bool force = false;
};

void add_shared(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--task", o.task, "text | token | span");
  cmd->add_option("--in", o.in, "input corpus (JSONL for text, CoNLL otherwise)");
  cmd->add_option("--out", o.out, "output directory (default aed-out)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--folds", o.folds, "number of cross-validation folds");
  cmd->add_option("--rate", o.rate, "fraction of labels to flip");
  cmd->add_option("--methods", o.methods, "comma-separated method codes");
  cmd->add_option("--model", o.models,
                  "comma-separated feature families; the first is primary");
  cmd->add_flag("--no-cv", o.no_cv, "train and predict in-sample");
  cmd->add_flag("--calibrate", o.calibrate,
                "Platt-scale the bundles used by CL, CU, DU and PM");
  cmd->add_option("--predictions", o.predictions,
                  "external single prediction bundle");
  cmd->add_option("--embeddings", o.embeddings, "external embedding set");
  cmd->add_option("--set", o.sets, "extra key=value configuration override");
  cmd->add_flag("--force", o.force, "rerun stages that are up to date");
}

aed::RunConfig resolve(const Overrides& o) {
  aed::RunConfig c;
  fs::path out = o.out.empty() ? fs::path("aed-out") : fs::path(o.out);
  if (!o.config.empty()) {
    c = aed::load_config(o.config);
    if (o.out.empty()) out = c.out;
  } else if (fs::exists(out / "run.cfg")) {
    c = aed::load_config(out / "run.cfg");
  }
  c.out = out;
  const std::pair<const char*, const std::string*> plain[] = {
      {"task", &o.task},     {"input", &o.in},      {"seed", &o.seed},
      {"folds", &o.folds},   {"rate", &o.rate},     {"methods", &o.methods},
      {"models", &o.models}, {"predictions", &o.predictions},
      {"embeddings", &o.embeddings}};
  for (const auto& [key, value] : plain) {
    if (!value->empty()) c.set(key, *value);
  }
  if (o.no_cv) c.cross_validate = false;
  if (o.calibrate) c.calibrate = true;
  for (const std::string& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw aed::ConfigError("--set expects key=value, got '" + s + "'");
    }
    c.set(s.substr(0, eq), s.substr(eq + 1));
  }
  c.validate();
  fs::create_directories(c.out);
  aed::save_config(c, c.out / "run.cfg");
  return c;
}

int synth(const std::string& task, std::size_t n, std::uint64_t seed,
          const std::string& out) {
  aed::Corpus corpus;
  switch (aed::parse_task(task)) {
    case aed::Task::kText: {
      aed::TextSynthOptions o;
      o.documents = n;
      o.seed = seed;
      corpus = aed::synth_text_corpus(o);
      break;
    }
    case aed::Task::kToken: {
      aed::SequenceSynthOptions o;
      o.sentences = n;
      o.seed = seed;
      corpus = aed::synth_token_corpus(o);
      break;
    }
    case aed::Task::kSpan: {
      aed::SequenceSynthOptions o;
      o.sentences = n;
      o.seed = seed;
      corpus = aed::synth_span_corpus(o);
      break;
    }
  }
  aed::write_corpus(corpus, out);
  std::cerr << "wrote " << corpus.documents.size() << " documents to " << out
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Annotation error detection for text, token and span labels"};
  app.require_subcommand(1);

  Overrides o;
  const std::map<std::string, aed::Stage> stages = {
      {"ingest", aed::Stage::kIngest},     {"corrupt", aed::Stage::kCorrupt},
      {"train", aed::Stage::kTrain},       {"calibrate", aed::Stage::kCalibrate},
      {"detect", aed::Stage::kDetect},     {"evaluate", aed::Stage::kEvaluate},
      {"report", aed::Stage::kReport}};
  std::map<CLI::App*, aed::Stage> stage_of;
  for (const auto& [name, stage] : stages) {
    CLI::App* cmd = app.add_subcommand(name, "run the " + name + " stage");
    add_shared(cmd, o);
    stage_of[cmd] = stage;
  }
  CLI::App* run = app.add_subcommand("run", "run every stage in order");
  add_shared(run, o);
  run->add_option("--config", o.config, "configuration file to start from");

  std::string synth_task = "text", synth_out;
  std::size_t synth_n = 200;
  std::uint64_t synth_seed = 1;
  CLI::App* gen = app.add_subcommand("synth", "write a synthetic clean corpus");
  gen->add_option("--task", synth_task, "text | token | span");
  gen->add_option("-n,--size", synth_n, "documents or sentences");
  gen->add_option("--seed", synth_seed, "random seed");
  gen->add_option("--out", synth_out, "output corpus file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return synth(synth_task, synth_n, synth_seed, synth_out);
    const aed::RunConfig config = resolve(o);
    aed::Pipeline pipeline(config, std::cerr, o.force);
    if (run->parsed()) {
      pipeline.run_all();
    } else {
      for (const auto& [cmd, stage] : stage_of) {
        if (cmd->parsed()) pipeline.run(stage);
      }
    }
  } catch (const aed::ConfigError& e) {
    std::cerr << "aed: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const aed::DataError& e) {
    std::cerr << "aed: data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "aed: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
