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

#include "narrev/rules.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "narrev/error.h"

namespace narrev {

const char kDefaultRuleInventory[] =
    "# Sentence rules (14)\n"
    "S -> S CC S\n"
    "S -> S PRN CC S\n"
    "S -> NP VP\n"
    "S -> NP ADVP VP\n"
    "S -> NP VP ADVP\n"
    "S -> CC NP VP\n"
    "S -> PP NP VP\n"
    "S -> NP PP VP\n"
    "S -> PP NP ADVP VP\n"
    "S -> ADVP S NP VP\n"
    "S -> ADVP NP VP\n"
    "S -> SBAR NP VP\n"
    "S -> SBAR ADVP NP VP\n"
    "S -> CC ADVP NP VP\n"
    "# Noun phrase rules (12)\n"
    "NP -> PRP\n"
    "NP -> NNP\n"
    "NP -> NNS\n"
    "NP -> NNP NNP\n"
    "NP -> NNP CC NNP\n"
    "NP -> NP CC NP\n"
    "NP -> DT NN\n"
    "NP -> DT NNS\n"
    "NP -> DT NNP\n"
    "NP -> DT NNPS\n"
    "NP -> NP NNP\n"
    "NP -> NP NNP NNP\n";

namespace {

// Tolerance for inclusive threshold comparisons on ratios of small counts.
constexpr double kEps = 1e-12;

bool AtLeast(double value, double threshold) { return value >= threshold - kEps; }
bool AtMost(double value, double threshold) { return value <= threshold + kEps; }

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

ProductionRule ContentProduction(const ParseTree &node) {
  ProductionRule rule;
  rule.lhs = node.label();
  rule.rhs = ContentChildLabels(node);
  return rule;
}

bool IsConjoinedClause(const std::vector<std::string> &rhs) {
  static const std::vector<std::string> kCoord = {"S", "CC", "S"};
  static const std::vector<std::string> kCoordPrn = {"S", "PRN", "CC", "S"};
  return rhs == kCoord || rhs == kCoordPrn;
}

}  // namespace

RuleInventory RuleInventory::Parse(std::string_view text) {
  RuleInventory inv;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    ProductionRule rule = ParseProductionRule(line);
    if (rule.lhs == "S") {
      inv.sentence_rules_.insert(rule);
    } else if (rule.lhs == "NP") {
      inv.np_rules_.insert(rule);
    } else {
      throw Error(ErrorCode::kParse,
                  "rule inventory line " + std::to_string(line_no) +
                      ": left-hand side must be S or NP, got '" + rule.lhs + "'");
    }
  }
  if (inv.sentence_rules_.empty() || inv.np_rules_.empty()) {
    throw Error(ErrorCode::kValidation,
                "rule inventory needs at least one S rule and one NP rule");
  }
  return inv;
}

RuleInventory RuleInventory::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open rule inventory '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

const RuleInventory &RuleInventory::Default() {
  static const RuleInventory inv = Parse(kDefaultRuleInventory);
  return inv;
}

bool RuleInventory::MatchesSentenceRule(const ParseTree &clause) const {
  if (clause.is_leaf()) return false;
  return sentence_rules_.count(ContentProduction(clause)) > 0;
}

bool RuleInventory::MatchesNpRule(const ParseTree &np) const {
  if (np.is_leaf()) return false;
  return np_rules_.count(ContentProduction(np)) > 0;
}

std::string RuleInventory::ToText() const {
  std::string out;
  for (const auto &r : sentence_rules_) out += r.ToString() + "\n";
  for (const auto &r : np_rules_) out += r.ToString() + "\n";
  return out;
}

std::string_view SentenceClassName(SentenceClass c) {
  switch (c) {
    case SentenceClass::kDeclarative:
      return "DECLARATIVE";
    case SentenceClass::kInterrogative:
      return "INTERROGATIVE";
    case SentenceClass::kExclamatory:
      return "EXCLAMATORY";
    case SentenceClass::kDialogue:
      return "DIALOGUE";
  }
  return "DECLARATIVE";
}

bool IsQuoteToken(std::string_view token) {
  return token == "\"" || token == "``" || token == "''" || token == "“" ||
         token == "”";
}

SentenceClass ClassifySentence(const SentenceAnnotation &sentence) {
  const auto &tokens = sentence.tokens;
  if (tokens.empty()) return SentenceClass::kDeclarative;

  if (IsQuoteToken(tokens.front().text) && IsQuoteToken(tokens.back().text) &&
      tokens.size() > 1) {
    return SentenceClass::kDialogue;
  }
  // Quotes pair up left to right; an unmatched final quote opens nothing.
  size_t quoted = 0;
  std::optional<size_t> open;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!IsQuoteToken(tokens[i].text)) continue;
    if (open) {
      quoted += i - *open + 1;
      open.reset();
    } else {
      open = i;
    }
  }
  if (2 * quoted >= tokens.size() && quoted > 0) return SentenceClass::kDialogue;

  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    if (IsQuoteToken(it->text)) continue;
    if (it->text == "?") return SentenceClass::kInterrogative;
    if (it->text == "!") return SentenceClass::kExclamatory;
    break;
  }
  return SentenceClass::kDeclarative;
}

bool IsVerbTag(std::string_view tag) {
  return tag == "VB" || tag == "VBD" || tag == "VBG" || tag == "VBN" ||
         tag == "VBP" || tag == "VBZ" || tag == "MD";
}

std::optional<HeadVerb> FindHeadVerb(const ParseTree &vp) {
  if (vp.is_leaf()) return std::nullopt;
  for (const ParseTree &c : vp.children()) {
    if (c.is_leaf() && IsVerbTag(c.label())) {
      return HeadVerb{&c, &vp, c.label(), *c.terminal()};
    }
  }
  for (const ParseTree &c : vp.children()) {
    if (c.label() == "VP") return FindHeadVerb(c);
  }
  return std::nullopt;
}

bool IsActantialClause(const ParseTree &clause, const RuleInventory &inv) {
  if (clause.is_leaf() || clause.label() != "S") return false;
  if (!inv.MatchesSentenceRule(clause)) return false;
  if (IsConjoinedClause(ContentChildLabels(clause))) {
    for (const ParseTree &c : clause.children()) {
      if (c.label() == "S" && IsActantialClause(c, inv)) return true;
    }
    return false;
  }
  const ParseTree *subject = nullptr;
  const ParseTree *vp = nullptr;
  for (const ParseTree &c : clause.children()) {
    if (!subject && c.label() == "NP") subject = &c;
    if (subject && !vp && c.label() == "VP") vp = &c;
  }
  if (!subject || !vp) return false;
  if (!inv.MatchesNpRule(*subject)) return false;
  auto head = FindHeadVerb(*vp);
  return head && head->pos == "VBD";
}

bool IsActantial(const SentenceAnnotation &sentence, const RuleInventory &inv) {
  return IsActantialClause(UnwrapRoot(sentence.tree), inv);
}

bool IsGenderedPronoun(std::string_view word) {
  const std::string w = Lowercase(word);
  return w == "he" || w == "him" || w == "his" || w == "she" || w == "her" ||
         w == "hers";
}

bool IsQualifyingMention(const ParagraphRecord &p, const EntityMention &m) {
  if (m.ner == NerLabel::kPerson || m.ner == NerLabel::kOrganization) {
    return true;
  }
  if (m.gendered_pronoun) return true;
  if (m.start == m.end && m.sentence_index >= 0 &&
      m.sentence_index < static_cast<int>(p.sentences.size())) {
    const auto &tokens = p.sentences[m.sentence_index].tokens;
    if (m.start >= 0 && m.start < static_cast<int>(tokens.size())) {
      return IsGenderedPronoun(tokens[m.start].text);
    }
  }
  return false;
}

bool IsQualifyingChain(const ParagraphRecord &p, const EntityChain &chain) {
  return std::any_of(
      chain.mentions.begin(), chain.mentions.end(),
      [&](const EntityMention &m) { return IsQualifyingMention(p, m); });
}

std::vector<EntityChain> QualifyingChains(const ParagraphRecord &p) {
  std::vector<EntityChain> out;
  for (const EntityChain &c : p.chains) {
    if (!c.mentions.empty() && IsQualifyingChain(p, c)) out.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [](const EntityChain &a, const EntityChain &b) {
              if (a.mentions.size() != b.mentions.size()) {
                return a.mentions.size() > b.mentions.size();
              }
              return a.chain_id < b.chain_id;
            });
  return out;
}

double ChainNormLength(const EntityChain &chain, size_t n_sentences) {
  if (n_sentences == 0) {
    throw InvalidArgument("chain length normalized by zero sentences");
  }
  return static_cast<double>(chain.mentions.size()) /
         static_cast<double>(n_sentences);
}

ParagraphProfile ProfileParagraph(const ParagraphRecord &p,
                                  const RuleInventory &inv) {
  ParagraphProfile profile;
  profile.n_sentences = p.sentences.size();
  if (profile.n_sentences == 0) return profile;
  size_t actantial = 0;
  size_t non_declarative = 0;
  for (const SentenceAnnotation &s : p.sentences) {
    if (IsActantial(s, inv)) ++actantial;
    if (ClassifySentence(s) != SentenceClass::kDeclarative) ++non_declarative;
  }
  const double n = static_cast<double>(profile.n_sentences);
  profile.actantial_fraction = static_cast<double>(actantial) / n;
  profile.non_declarative_fraction = static_cast<double>(non_declarative) / n;
  auto chains = QualifyingChains(p);
  if (!chains.empty()) {
    profile.longest_chain_norm = ChainNormLength(chains.front(), profile.n_sentences);
  }
  return profile;
}

bool IsSeedNarrative(const ParagraphProfile &profile,
                     const NarrativeThresholds &t) {
  return profile.n_sentences >= t.min_sentences &&
         AtLeast(profile.actantial_fraction, t.seed_min_actantial) &&
         AtMost(profile.non_declarative_fraction, t.max_non_declarative) &&
         AtLeast(profile.longest_chain_norm, t.seed_min_chain);
}

bool IsCandidate(const ParagraphProfile &profile, const NarrativeThresholds &t) {
  return profile.n_sentences >= t.min_sentences &&
         AtMost(profile.non_declarative_fraction, t.max_non_declarative) &&
         AtLeast(profile.actantial_fraction, t.candidate_min_actantial) &&
         AtLeast(profile.longest_chain_norm, t.candidate_min_chain);
}

bool IsSeedNegative(const ParagraphProfile &profile,
                    const NarrativeThresholds &t) {
  return profile.n_sentences >= t.min_sentences &&
         AtMost(profile.non_declarative_fraction, t.max_non_declarative) &&
         AtMost(profile.actantial_fraction, t.negative_max_actantial) &&
         AtMost(profile.longest_chain_norm, t.negative_max_chain);
}

}  // namespace narrev
