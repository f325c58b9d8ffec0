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


// Batch commands over files: validate, seed, bootstrap, extract, cloze and
// stats. Each command reads its inputs from the config, writes artifacts
// under the output directory and returns a JSON report.

#ifndef NARREV_PIPELINE_H_
#define NARREV_PIPELINE_H_

#include <string>
#include <string_view>

#include "narrev/bootstrap.h"
#include "narrev/cloze.h"
#include "narrev/error.h"
#include "narrev/events.h"

namespace narrev {

struct PipelineConfig {
  std::string corpus;
  std::string lexicon;     // optional
  std::string rules;       // optional; the built-in inventory otherwise
  std::string out = "out";
  std::string seeds;       // optional seed list for bootstrap
  std::string narratives;  // optional narrative list for extract and cloze
  std::string questions;   // optional fixed cloze questions
  std::string counts;      // optional count table for cloze
  size_t workers = 0;
  uint64_t seed = 1;
  BootstrapConfig bootstrap;
  double min_cp = 2.0;
  ChainOptions chains;
  ClozeConfig cloze;
  double cloze_holdout = 0.1;
  std::string log_level;  // empty: leave the logger alone

  // Unknown keys are rejected. Missing keys keep their defaults.
  static PipelineConfig FromJson(std::string_view text);
  std::string ToJson() const;

  // Numeric ranges and that every configured input path exists.
  void Validate() const;
};

struct CommandResult {
  int exit_code = 0;  // 0 ok, 1 validation failure, 2 runtime error
  std::string report;  // JSON
};

// Streams the corpus and reports per-line problems; exit 1 if any.
CommandResult RunValidate(const PipelineConfig &cfg);
// Writes seeds.tsv (seed ids and profiles) and profiles.tsv.
CommandResult RunSeed(const PipelineConfig &cfg);
// Writes the bootstrap artifacts under <out>/bootstrap.
CommandResult RunBootstrapCommand(const PipelineConfig &cfg);
// Writes pairs.tsv, chains.tsv and counts.json under <out>/knowledge.
CommandResult RunExtract(const PipelineConfig &cfg);
// Writes report.json and questions.jsonl under <out>/cloze.
CommandResult RunCloze(const PipelineConfig &cfg);
CommandResult RunStats(const PipelineConfig &cfg);

// Dispatches on a command name; unknown names are an InvalidArgument.
CommandResult RunCommand(std::string_view command, const PipelineConfig &cfg);

// Maps an error code to a process exit code.
int ExitCodeFor(ErrorCode code);

// Paragraph ids, one per line; a tab-separated first column is accepted and
// a header line starting with "id" is skipped.
std::vector<std::string> ReadIdList(const std::string &path);

}  // namespace narrev

#endif  // NARREV_PIPELINE_H_
