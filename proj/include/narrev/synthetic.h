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


// Generator of annotated corpora with planted paragraph labels, for tests,
// demos and the bundled sample corpus.

#ifndef NARREV_SYNTHETIC_H_
#define NARREV_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "narrev/corpus.h"

namespace narrev {

enum class PlantedKind {
  kSeedNarrative,  // past-tense script, rule-conforming subjects
  kWeakNarrative,  // past-tense script, mostly descriptive subjects
  kExpository,     // a little biography, mostly present tense
  kGeneric,        // present-tense facts
  kDialogue,       // quoted speech and questions
};

std::string_view PlantedKindName(PlantedKind kind);
bool IsNarrativeKind(PlantedKind kind);

struct SyntheticConfig {
  size_t documents = 200;
  size_t paragraphs_per_document = 5;
  uint64_t seed = 7;
  // Relative weights of the planted kinds, in enum order.
  std::vector<double> weights = {0.10, 0.15, 0.15, 0.50, 0.10};
};

struct SyntheticCorpus {
  std::vector<DocumentRecord> documents;
  std::map<std::string, PlantedKind> truth;  // by paragraph id
};

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig &cfg = {});

// Builds a sentence from a PTB string; lemmas for known verb forms come
// from the generator's lexicon, others are the lowercased word.
SentenceAnnotation MakeSentence(std::string_view ptb);

}  // namespace narrev

#endif  // NARREV_SYNTHETIC_H_
