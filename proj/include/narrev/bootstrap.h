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

// Weakly supervised narrative learning: seeds from the hard rules, then
// repeated rounds of train -> score candidates -> absorb confident ones,
// with a rising confidence threshold.

#ifndef NARREV_BOOTSTRAP_H_
#define NARREV_BOOTSTRAP_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "narrev/corpus.h"
#include "narrev/features.h"
#include "narrev/maxent.h"
#include "narrev/random.h"
#include "narrev/rules.h"

namespace narrev {

struct BootstrapConfig {
  double initial_threshold = 0.5;
  double threshold_increment = 0.05;
  size_t min_new_narratives = 2000;
  size_t neg_ratio = 5;
  size_t max_iterations = 10;
  uint64_t rng_seed = 1;
  size_t workers = 0;  // 0 = available parallelism
  TrainConfig train;
  NarrativeThresholds thresholds;
  ChainMatch chain_match = ChainMatch::kById;

  // Throws InvalidArgument when a field is out of range.
  void Validate() const;
  double ThresholdAt(size_t iteration) const {
    return initial_threshold + static_cast<double>(iteration) * threshold_increment;
  }
};

struct IterationStats {
  size_t iteration = 0;
  double threshold = 0.0;
  size_t positives = 0;       // learned narratives used as positives
  size_t negatives = 0;       // sampled negatives
  size_t candidates_scored = 0;
  size_t accepted = 0;        // new narratives this iteration
  size_t learned_total = 0;   // after this iteration
  bool negatives_exhausted = false;
  std::vector<std::string> accepted_ids;  // sorted
  MaxEntModel model;
};

struct BootstrapReport {
  std::vector<std::string> seed_ids;  // sorted
  std::vector<IterationStats> iterations;
  std::vector<std::string> learned_ids;  // sorted, seeds included

  // Table-1 shaped summary: {"seeds": n, "iterations": [...], "total": n}.
  std::string StatsJson() const;
};

// Rule-stage classification of every paragraph in a corpus.
struct CorpusProfiles {
  std::vector<ParagraphProfile> profiles;
  std::vector<bool> seed;
  std::vector<bool> candidate;
  std::vector<bool> negative;  // seed-negative and not a seed
};

CorpusProfiles ProfileCorpus(const Corpus &corpus, const RuleInventory &inv,
                             const NarrativeThresholds &thresholds = {},
                             size_t workers = 0);

struct NegativeSample {
  std::vector<size_t> indices;  // into the available pool, in draw order
  bool exhausted = false;       // fewer available than neg_ratio * n_pos
};

// Uniform sample without replacement of min(neg_ratio * n_pos, available)
// items. Throws InvalidArgument when nothing is available.
NegativeSample SampleNegatives(size_t available, size_t n_pos, size_t neg_ratio,
                               Rng &rng);

// Event bigram model over the main-event sequences of the given paragraphs.
BigramLanguageModel RebuildLanguageModel(
    const std::vector<const ParagraphRecord *> &paragraphs);

struct BootstrapInputs {
  const Corpus *corpus = nullptr;
  const RuleInventory *rules = nullptr;
  const LexiconDictionary *lexicon = nullptr;
  // Seed ids to start from; computed from the rules when absent.
  std::optional<std::vector<std::string>> seed_ids;
};

// Throws Error("empty seed set") when there are no seeds.
BootstrapReport RunBootstrap(const BootstrapInputs &inputs,
                             const BootstrapConfig &cfg);

// Writes iter_<k>/{model.json, accepted.txt, stats.json}, narratives.txt
// and stats.json under `dir`.
void WriteBootstrapArtifacts(const BootstrapReport &report, const std::string &dir);

}  // namespace narrev

#endif  // NARREV_BOOTSTRAP_H_
