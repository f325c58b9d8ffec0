// Copyright 2026 The Narrev Authors.
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


// narrev: command-line driver over the C API.
//
//   narrev [options] validate|seed|bootstrap|extract|cloze|stats
//
// Configuration comes from --config (JSON) with flags taking precedence.
// Reports are printed to stdout as JSON; logs go to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "narrev/narrev.h"

namespace {

using json = nlohmann::json;

struct Flags {
  std::string config;
  std::optional<std::string> corpus, out, lexicon, rules, seeds, narratives, questions,
      counts, log;
  std::optional<uint64_t> seed;
  std::optional<size_t> workers, min_new, neg_ratio, max_iter, runs, max_chains;
  std::optional<double> min_cp, threshold, increment;
};

template <typename T>
void Set(json &js, const char *key, const std::optional<T> &v) {
  if (v) js[key] = *v;
}

// Exit 1 on a bad config file, like any other validation failure.
std::optional<json> BuildConfig(const Flags &f) {
  json js = json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) {
      std::cerr << "narrev: cannot read config " << f.config << "\n";
      return std::nullopt;
    }
    try {
      js = json::parse(in);
    } catch (const json::exception &e) {
      std::cerr << "narrev: bad config " << f.config << ": " << e.what() << "\n";
      return std::nullopt;
    }
    if (!js.is_object()) {
      std::cerr << "narrev: config must be a JSON object\n";
      return std::nullopt;
    }
  }
  Set(js, "corpus", f.corpus);
  Set(js, "out", f.out);
  Set(js, "lexicon", f.lexicon);
  Set(js, "rules", f.rules);
  Set(js, "seeds", f.seeds);
  Set(js, "narratives", f.narratives);
  Set(js, "questions", f.questions);
  Set(js, "counts", f.counts);
  Set(js, "log", f.log);
  Set(js, "seed", f.seed);
  Set(js, "workers", f.workers);
  auto section = [&js](const char *name) -> json & {
    if (!js.contains(name) || js[name].is_null()) js[name] = json::object();
    return js[name];
  };
  if (f.min_new || f.neg_ratio || f.max_iter || f.threshold || f.increment) {
    json &b = section("bootstrap");
    Set(b, "min_new", f.min_new);
    Set(b, "neg_ratio", f.neg_ratio);
    Set(b, "max_iterations", f.max_iter);
    Set(b, "initial_threshold", f.threshold);
    Set(b, "threshold_increment", f.increment);
  }
  if (f.min_cp || f.max_chains) {
    json &k = section("knowledge");
    Set(k, "min_cp", f.min_cp);
    Set(k, "max_chains", f.max_chains);
  }
  if (f.runs) section("cloze")["runs"] = *f.runs;
  return js;
}

int Run(const std::string &command, const Flags &flags) {
  std::optional<json> config = BuildConfig(flags);
  if (!config) return 1;
  narrev_pipeline *pipeline = nullptr;
  narrev_status status = narrev_pipeline_create(config->dump().c_str(), &pipeline);
  if (status != NARREV_OK) {
    std::cerr << "narrev: " << narrev_last_error() << "\n";
    return narrev_exit_code(status);
  }
  char *report = nullptr;
  status = narrev_pipeline_run(pipeline, command.c_str(), &report);
  if (report != nullptr) {
    std::cout << report << "\n";
    narrev_string_free(report);
  }
  if (status != NARREV_OK) std::cerr << "narrev " << command << ": " << narrev_last_error() << "\n";
  narrev_pipeline_destroy(pipeline);
  return narrev_exit_code(status);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Narrative identification and event knowledge pipeline"};
  app.set_version_flag("--version", std::string(narrev_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Flags f;
  app.add_option("--config", f.config, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--corpus", f.corpus, "Annotated corpus (JSON Lines)");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--lexicon", f.lexicon, "Word category lexicon (TSV)");
  app.add_option("--rules", f.rules, "Grammar rule inventory");
  app.add_option("--seeds", f.seeds, "Seed paragraph ids for bootstrap");
  app.add_option("--narratives", f.narratives, "Narrative paragraph ids for extract/cloze");
  app.add_option("--questions", f.questions, "Fixed cloze questions (JSON Lines)");
  app.add_option("--counts", f.counts, "Event count table for --questions");
  app.add_option("--log", f.log, "Log level (trace, debug, info, warn, error, off)");
  app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--workers", f.workers, "Worker threads (0 = all cores)");
  app.add_option("--min-cp", f.min_cp, "Causal potential cutoff for pairs");
  app.add_option("--max-chains", f.max_chains, "Maximum number of chains written");
  app.add_option("--min-new", f.min_new, "Stop when fewer new narratives are learned");
  app.add_option("--neg-ratio", f.neg_ratio, "Negatives per positive");
  app.add_option("--max-iter", f.max_iter, "Maximum bootstrap iterations");
  app.add_option("--threshold", f.threshold, "Initial acceptance threshold");
  app.add_option("--increment", f.increment, "Threshold increment per iteration");
  app.add_option("--runs", f.runs, "Cloze evaluation runs");

  std::string command;
  const std::pair<const char *, const char *> commands[] = {
      {"validate", "Check a corpus file and report bad lines"},
      {"seed", "Select seed narratives with the grammar rules"},
      {"bootstrap", "Learn narratives iteratively from the seeds"},
      {"extract", "Rank event pairs and chains from learned narratives"},
      {"cloze", "Evaluate next-event prediction"},
      {"stats", "Summarize a corpus and the last bootstrap"},
  };
  for (const auto &[name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough()->callback(
        [&command, name = std::string(name)] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return Run(command, f);
}
