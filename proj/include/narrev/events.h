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

// Temporal event knowledge: main-event sequences, distance-bucketed
// co-occurrence counts, PMI and Causal Potential scoring of event pairs and
// event chains.
//
// For a distance d in {1, 2, 3} (d - 1 intervening events):
//   pmi_d(a, b) = ln( P_d(a, b) / (P(a) P(b)) )
//   P_d(a, b)   = (C_d(a, b) + C_d(b, a)) / sum_{x,y} C_d(x, y)
//   P(a)        = C(a) / sum_x C(x)
//   cp_d(a, b)  = pmi_d(a, b) + ln( C_d(a, b) / C_d(b, a) )
//   CP(a, b)    = sum_d cp_d(a, b) / d
// and a chain e_1..e_n scores
//   ( sum_d sum_{j=1..n-d} CP(e_j, e_{j+d}) / d ) / (n - 1).

#ifndef NARREV_EVENTS_H_
#define NARREV_EVENTS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "narrev/corpus.h"

namespace narrev {

struct EventToken {
  std::string lemma;     // lowercased verb base form
  std::string particle;  // empty when none

  // "lemma" or "lemma_particle".
  std::string Canonical() const;

  bool operator==(const EventToken &) const = default;
};

struct EventSequence {
  std::string paragraph_id;
  std::vector<EventToken> events;

  std::vector<std::string> Canonical() const;
};

struct EventExtractionOptions {
  // Emit one event per VP conjunct of a coordinated main VP.
  bool split_coordinated_vps = true;
};

// Main events of one sentence, in textual order. Only verbs tagged VB, VBP,
// VBZ or VBD are emitted.
std::vector<EventToken> SentenceEvents(const SentenceAnnotation &sentence,
                                       const EventExtractionOptions &opts = {});

EventSequence ExtractEventSequence(const ParagraphRecord &p,
                                   const EventExtractionOptions &opts = {});

inline constexpr int kMaxDistance = 3;

// Unigram counts and ordered co-occurrence counts per distance bucket.
class EventCountTable {
 public:
  using PairKey = std::pair<std::string, std::string>;

  void AddSequence(const std::vector<std::string> &events);
  void Merge(const EventCountTable &other);

  int64_t Unigram(std::string_view e) const;
  // Ordered count C_d(a, b): a precedes b with d - 1 events in between.
  int64_t Cooc(std::string_view a, std::string_view b, int d) const;
  int64_t UnigramTotal() const { return unigram_total_; }
  int64_t BucketTotal(int d) const;

  const std::map<std::string, int64_t> &unigrams() const { return unigrams_; }
  const std::map<PairKey, int64_t> &bucket(int d) const;

  bool empty() const { return unigram_total_ == 0; }

  // {"unigrams": [[e, c], ...], "cooc": {"1": [[a, b, c], ...], ...}}
  std::string ToJson() const;
  static EventCountTable FromJson(std::string_view text);
  void Save(const std::string &path) const;
  static EventCountTable Load(const std::string &path);

  bool operator==(const EventCountTable &) const = default;

 private:
  std::map<std::string, int64_t> unigrams_;
  std::array<std::map<PairKey, int64_t>, kMaxDistance> buckets_;
  int64_t unigram_total_ = 0;
  std::array<int64_t, kMaxDistance> bucket_totals_{};
};

EventCountTable BuildCountTable(const std::vector<EventSequence> &seqs);
EventCountTable BuildCountTable(
    const std::vector<std::vector<std::string>> &seqs);

enum class PmiNumerator {
  kUnordered,  // C_d(a, b) + C_d(b, a); C_d(a, a) for a == b
  kOrdered,    // C_d(a, b)
};

struct ScoringOptions {
  PmiNumerator numerator = PmiNumerator::kUnordered;
};

// Throws UndefinedScoreError when the co-occurrence or a unigram is zero.
double Pmi(const EventCountTable &t, std::string_view a, std::string_view b,
           int d, const ScoringOptions &opts = {});

struct CpTerm {
  double value = 0.0;
  // The reverse count was zero; add-one was applied to both ordered counts
  // of the ordering ratio.
  bool smoothed = false;
};

// Throws UndefinedScoreError when C_d(a, b) is zero.
CpTerm CpD(const EventCountTable &t, std::string_view a, std::string_view b,
           int d, const ScoringOptions &opts = {});

struct ScoredPair {
  std::string first;
  std::string second;
  std::array<std::optional<double>, kMaxDistance> cp_d;  // nullopt: undefined
  std::array<bool, kMaxDistance> smoothed{};
  double cp = 0.0;
  int64_t support = 0;  // C_1(first, second)

  // sum_d cp_d / d over defined terms.
  double Recompute() const;
};

// Sum of the defined cp_d / d terms, without the candidacy requirement.
ScoredPair ScorePair(const EventCountTable &t, std::string_view a,
                     std::string_view b, const ScoringOptions &opts = {});

// Weighted CP of a candidate pair. Throws InvalidArgument unless the pair
// occurred consecutively (C_1(a, b) > 0).
ScoredPair WeightedCp(const EventCountTable &t, std::string_view a,
                      std::string_view b, const ScoringOptions &opts = {});

// The chain formula with no length or support checks; needs n >= 2.
double ChainFormula(const EventCountTable &t,
                    const std::vector<std::string> &chain,
                    const ScoringOptions &opts = {});

// Chain score. Throws InvalidArgument unless 3 <= n <= 5 and every adjacent
// pair has d = 1 support.
double ChainScore(const EventCountTable &t,
                  const std::vector<std::string> &chain,
                  const ScoringOptions &opts = {});

// Candidate pairs with CP >= min_cp, by CP descending, then support
// descending, then (first, second) ascending.
std::vector<ScoredPair> RankPairs(const EventCountTable &t, double min_cp = 2.0,
                                  const ScoringOptions &opts = {});

struct ScoredChain {
  std::vector<std::string> events;
  double score = 0.0;
  int64_t support = 0;  // occurrences as a segment across sequences
};

struct ChainOptions {
  size_t min_length = 3;
  size_t max_length = 5;
  size_t max_out = 25000;
};

// Every distinct contiguous segment of length [min_length, max_length],
// scored, by score descending, then support descending, then events
// ascending; at most max_out.
std::vector<ScoredChain> RankChains(
    const EventCountTable &t, const std::vector<std::vector<std::string>> &seqs,
    const ChainOptions &chain_opts = {}, const ScoringOptions &opts = {});

// "a<TAB>b<TAB>CP<TAB>cp_1<TAB>cp_2<TAB>cp_3<TAB>support"; undefined terms
// are written as NA.
std::string FormatPairTsv(const ScoredPair &pair);
// "e1>e2>...<TAB>score<TAB>support"
std::string FormatChainTsv(const ScoredChain &chain);

}  // namespace narrev

#endif  // NARREV_EVENTS_H_
