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

// Seed-stage narrative rules: actantial sentence detection, sentence types,
// the protagonist (character) rule and the seed / candidate / negative
// paragraph predicates.

#ifndef NARREV_RULES_H_
#define NARREV_RULES_H_

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "narrev/corpus.h"
#include "narrev/tree.h"

namespace narrev {

// Grammar patterns for actantial sentences. Sentence rules have LHS "S",
// subject noun phrase rules have LHS "NP". Patterns are matched against a
// node's children with punctuation preterminals removed.
class RuleInventory {
 public:
  // The 14 sentence rules and 12 noun phrase rules.
  static const RuleInventory &Default();
  // One rule per line ("S -> NP VP"); blank lines and '#' comments ignored.
  static RuleInventory Parse(std::string_view text);
  static RuleInventory Load(const std::string &path);

  const std::set<ProductionRule> &sentence_rules() const {
    return sentence_rules_;
  }
  const std::set<ProductionRule> &np_rules() const { return np_rules_; }

  bool MatchesSentenceRule(const ParseTree &clause) const;
  bool MatchesNpRule(const ParseTree &np) const;

  // The inventory text, one rule per line, sentence rules first.
  std::string ToText() const;

 private:
  std::set<ProductionRule> sentence_rules_;
  std::set<ProductionRule> np_rules_;
};

// The bundled inventory as text.
extern const char kDefaultRuleInventory[];

enum class SentenceClass { kDeclarative, kInterrogative, kExclamatory, kDialogue };

std::string_view SentenceClassName(SentenceClass c);

// Quotation tokens used by the dialogue and final-token tests.
bool IsQuoteToken(std::string_view token);

// DIALOGUE if at least half of the tokens lie inside paired quotes (quote
// tokens included) or the sentence starts and ends with a quote token;
// otherwise INTERROGATIVE / EXCLAMATORY on a final non-quote "?" / "!";
// otherwise DECLARATIVE.
SentenceClass ClassifySentence(const SentenceAnnotation &sentence);

// A verb preterminal heading a VP.
struct HeadVerb {
  const ParseTree *node = nullptr;  // the preterminal
  const ParseTree *vp = nullptr;    // the VP it is a direct child of
  std::string pos;
  std::string word;
};

bool IsVerbTag(std::string_view tag);

// First verb-tagged (VB*, MD) preterminal among vp's direct children. A
// coordinated VP without a direct verb child (VP -> VP CC VP) is headed by
// its first VP conjunct.
std::optional<HeadVerb> FindHeadVerb(const ParseTree &vp);

// True iff the clause expansion is a sentence rule, its subject NP
// expansion is an NP rule, and the main VP head is VBD. For S -> S CC S
// (and S -> S PRN CC S) either conjunct may satisfy the test.
bool IsActantial(const SentenceAnnotation &sentence, const RuleInventory &inv);
bool IsActantialClause(const ParseTree &clause, const RuleInventory &inv);

bool IsGenderedPronoun(std::string_view word);

// Whether a mention makes its chain a character chain: PERSON or
// ORGANIZATION, or a gendered pronoun (by flag or by its single token).
bool IsQualifyingMention(const ParagraphRecord &p, const EntityMention &m);
bool IsQualifyingChain(const ParagraphRecord &p, const EntityChain &chain);

// Character chains, longest first; ties by chain id ascending.
std::vector<EntityChain> QualifyingChains(const ParagraphRecord &p);

// mentions / n_sentences. Throws InvalidArgument when n_sentences is 0.
double ChainNormLength(const EntityChain &chain, size_t n_sentences);

struct ParagraphProfile {
  size_t n_sentences = 0;
  double actantial_fraction = 0.0;
  double non_declarative_fraction = 0.0;
  double longest_chain_norm = 0.0;

  bool operator==(const ParagraphProfile &) const = default;
};

ParagraphProfile ProfileParagraph(const ParagraphRecord &p,
                                  const RuleInventory &inv);

// All comparisons are inclusive.
struct NarrativeThresholds {
  size_t min_sentences = 4;
  double max_non_declarative = 0.2;
  double seed_min_actantial = 0.6;
  double seed_min_chain = 0.4;
  double candidate_min_actantial = 0.3;
  double candidate_min_chain = 0.2;
  double negative_max_actantial = 0.3;
  double negative_max_chain = 0.2;
};

bool IsSeedNarrative(const ParagraphProfile &profile,
                     const NarrativeThresholds &t = {});
bool IsCandidate(const ParagraphProfile &profile,
                 const NarrativeThresholds &t = {});
bool IsSeedNegative(const ParagraphProfile &profile,
                    const NarrativeThresholds &t = {});

}  // namespace narrev

#endif  // NARREV_RULES_H_
