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


// Multiple-choice narrative cloze: given the first n - 1 events of a
// sequence, pick the held-out last event among five candidates by summed
// PMI against the context.

#ifndef NARREV_CLOZE_H_
#define NARREV_CLOZE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "narrev/events.h"
#include "narrev/random.h"

namespace narrev {

inline constexpr size_t kClozeCandidates = 5;

struct ClozeQuestion {
  std::vector<std::string> context;
  std::vector<std::string> candidates;  // kClozeCandidates, distinct
  size_t answer_index = 0;

  // Throws InvalidArgument when the invariants do not hold.
  void Validate() const;
  bool operator==(const ClozeQuestion &) const = default;
};

enum class ClozePmiMode {
  // Unordered co-occurrence summed over all distance buckets.
  kAggregated,
  // sum_d pmi_d / d over the buckets where the pair was seen.
  kDistanceWeighted,
};

struct ClozeConfig {
  size_t runs = 10;
  uint64_t rng_seed = 1;
  double unseen_value = 0.0;
  ClozePmiMode mode = ClozePmiMode::kAggregated;
  size_t workers = 0;

  void Validate() const;
};

// Draws one question per sequence. The last event is the answer and four
// distractors are sampled uniformly from `vocab` minus the answer and the
// context. Throws InvalidArgument for a sequence shorter than 2, and when
// fewer than four distractors remain.
std::vector<ClozeQuestion> GenerateQuestions(
    const std::vector<std::vector<std::string>> &seqs,
    const std::vector<std::string> &vocab, Rng &rng);

// PMI of an event pair for cloze scoring; `unseen` when the pair or either
// event has no count.
double ClozePmi(const EventCountTable &t, std::string_view a, std::string_view b,
                const ClozeConfig &cfg);

// sum over context events e of ClozePmi(e, cand).
double ScoreCandidate(const EventCountTable &t,
                      const std::vector<std::string> &context,
                      std::string_view cand, const ClozeConfig &cfg);

using ClozeScorer =
    std::function<double(const std::vector<std::string> &, const std::string &)>;

// Index of the best-scoring candidate; ties go to the lexicographically
// smallest candidate.
size_t Answer(const ClozeQuestion &q, const ClozeScorer &scorer);

struct ClozeReport {
  double mean = 0.0;
  std::vector<double> runs;

  // {"mean": r, "runs": [...]}
  std::string ToJson() const;
};

// Fraction of questions answered correctly.
double Accuracy(const std::vector<ClozeQuestion> &questions,
                const ClozeScorer &scorer, size_t workers = 0);

// cfg.runs rounds of generation + answering, each with its own seed
// derived from cfg.rng_seed.
ClozeReport Evaluate(const std::vector<std::vector<std::string>> &seqs,
                     const std::vector<std::string> &vocab,
                     const ClozeScorer &scorer, const ClozeConfig &cfg);
ClozeReport Evaluate(const EventCountTable &t,
                     const std::vector<std::vector<std::string>> &seqs,
                     const ClozeConfig &cfg);
// A fixed question set: one run.
ClozeReport Evaluate(const EventCountTable &t,
                     const std::vector<ClozeQuestion> &questions,
                     const ClozeConfig &cfg);

// JSON Lines: {"context": [...], "candidates": [...], "answer": i}
std::string QuestionToJson(const ClozeQuestion &q);
ClozeQuestion QuestionFromJson(std::string_view line);
std::vector<ClozeQuestion> LoadQuestions(const std::string &path);

}  // namespace narrev

#endif  // NARREV_CLOZE_H_
