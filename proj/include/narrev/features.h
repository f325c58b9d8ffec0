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

// Classifier features for a paragraph: production-rule counts, event-bigram
// perplexity, protagonist chain lengths, lexicon category counts and POS
// counts. Values are raw counts except the chain lengths and perplexity.

#ifndef NARREV_FEATURES_H_
#define NARREV_FEATURES_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "narrev/corpus.h"

namespace narrev {

// Feature name -> dense id. Names are namespaced: "rule:S→NP VP", "pp",
// "chain:1".."chain:6", "liwc:<category>", "pos:<tag>".
class FeatureSpace {
 public:
  std::optional<int> Find(std::string_view name) const;
  // The id for `name`, adding it while the space is not frozen. Returns
  // nullopt for an unknown name once frozen.
  std::optional<int> Intern(const std::string &name);

  void Freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  size_t size() const { return names_.size(); }
  const std::vector<std::string> &names() const { return names_; }

  // {"name": id, ...}
  std::string ToJson() const;
  // Loads a frozen space; ids must be dense.
  static FeatureSpace FromJson(std::string_view text);

  bool operator==(const FeatureSpace &other) const {
    return names_ == other.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
  bool frozen_ = false;
};

// Sparse vector with strictly increasing ids and finite values.
struct FeatureVector {
  std::vector<std::pair<int, double>> entries;

  // Throws InvalidArgument when ids are not strictly increasing or a value
  // is not finite.
  void Validate() const;
  bool operator==(const FeatureVector &) const = default;
};

// Named, unordered partial features.
using NamedFeatures = std::map<std::string, double>;

// Maps named features through `space`. Unknown names are added while the
// space is unfrozen and dropped after.
FeatureVector ToVector(const NamedFeatures &named, FeatureSpace &space);
// Read-only mapping; unknown names are dropped. Safe to call concurrently.
FeatureVector ToVector(const NamedFeatures &named, const FeatureSpace &space);

// Event bigram counts.
class BigramLanguageModel {
 public:
  void AddSequence(const std::vector<std::string> &events);

  int64_t Count(std::string_view e) const;
  int64_t Count(std::string_view prev, std::string_view next) const;
  size_t vocab_size() const { return unigrams_.size(); }
  bool empty() const { return unigrams_.empty(); }

  bool Contains(std::string_view e) const;

 private:
  std::map<std::string, int64_t, std::less<>> unigrams_;
  std::map<std::pair<std::string, std::string>, int64_t> bigrams_;
};

struct PerplexityOptions {
  // Add-one: P(b | a) = (C(a, b) + 1) / (C(a) + V) where V counts the model
  // vocabulary plus query events the model has not seen.
  bool smoothing = true;
};

// PP = (prod_{i=2..N} 1 / P(e_i | e_{i-1}))^(1/N). Throws InvalidArgument
// for N < 2, and UndefinedScoreError for a zero probability without
// smoothing.
double Perplexity(const std::vector<std::string> &events,
                  const BigramLanguageModel &lm,
                  const PerplexityOptions &opts = {});

// Word-category dictionary. Patterns are lowercase literals or prefixes
// ending in '*'.
class LexiconDictionary {
 public:
  // "category<TAB>pattern1,pattern2,..." per line; '#' comments allowed.
  static LexiconDictionary Parse(std::string_view text);
  static LexiconDictionary Load(const std::string &path);

  const std::map<std::string, std::vector<std::string>> &categories() const {
    return categories_;
  }
  // Categories whose patterns match the (lowercased) word.
  std::vector<std::string> Match(std::string_view word) const;

 private:
  std::map<std::string, std::vector<std::string>> categories_;
};

// Count of every non-lexical production rule, keyed "rule:<lhs>→<rhs>".
NamedFeatures RuleFeatures(const ParagraphRecord &p);

// Count of every POS tag, keyed "pos:<tag>".
NamedFeatures PosFeatures(const ParagraphRecord &p);

// Count of tokens per category, keyed "liwc:<category>". Every category is
// present, zero included.
NamedFeatures LexiconFeatures(const ParagraphRecord &p,
                              const LexiconDictionary &dict);

enum class ChainMatch {
  kById,          // chain ids are document-scoped
  kByHeadString,  // chains match on their first non-pronoun mention text
};

// Features 1-3: the three longest character chains of the target, divided
// by its sentence count. Features 4-6: the same over the prev/target/next
// window with chains merged across paragraphs, divided by the window's
// sentence count. Missing chains give 0.
std::array<double, 6> ProtagonistFeatures(const ParagraphWindow &window,
                                          ChainMatch match = ChainMatch::kById);

struct FeatureContext {
  const BigramLanguageModel *lm = nullptr;
  const LexiconDictionary *lexicon = nullptr;
  ChainMatch chain_match = ChainMatch::kById;
  PerplexityOptions perplexity;
};

// All families for one paragraph, by name. "pp" is omitted when the
// paragraph has fewer than two events or no model is given.
NamedFeatures NamedParagraphFeatures(const ParagraphWindow &window,
                                     const FeatureContext &ctx);

FeatureVector Assemble(const ParagraphWindow &window, const FeatureContext &ctx,
                       FeatureSpace &space);

}  // namespace narrev

#endif  // NARREV_FEATURES_H_
