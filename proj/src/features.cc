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

#include "narrev/features.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "narrev/error.h"
#include "narrev/events.h"
#include "narrev/rules.h"
#include "narrev/tree.h"

namespace narrev {

using json = nlohmann::json;

namespace {

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool PatternMatches(std::string_view pattern, std::string_view word) {
  if (!pattern.empty() && pattern.back() == '*') {
    pattern.remove_suffix(1);
    return word.substr(0, pattern.size()) == pattern;
  }
  return word == pattern;
}

// Identity of a chain for window merging.
std::string ChainKey(const ParagraphRecord &p, const EntityChain &chain,
                     ChainMatch match) {
  if (match == ChainMatch::kById) return "id:" + std::to_string(chain.chain_id);
  const EntityMention *pick = &chain.mentions.front();
  for (const EntityMention &m : chain.mentions) {
    const auto &tokens = p.sentences[m.sentence_index].tokens;
    const bool pronoun = m.start == m.end &&
                         (tokens[m.start].pos == "PRP" || tokens[m.start].pos == "PRP$");
    if (!pronoun) {
      pick = &m;
      break;
    }
  }
  const auto &tokens = p.sentences[pick->sentence_index].tokens;
  std::string key = "head:";
  for (int i = pick->start; i <= pick->end; ++i) {
    if (i > pick->start) key += " ";
    key += Lowercase(tokens[i].text);
  }
  return key;
}

}  // namespace

std::optional<int> FeatureSpace::Find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> FeatureSpace::Intern(const std::string &name) {
  if (auto id = Find(name)) return id;
  if (frozen_) return std::nullopt;
  const int id = static_cast<int>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

std::string FeatureSpace::ToJson() const {
  json js = json::object();
  for (size_t i = 0; i < names_.size(); ++i) js[names_[i]] = i;
  return js.dump();
}

FeatureSpace FeatureSpace::FromJson(std::string_view text) {
  FeatureSpace space;
  try {
    json js = json::parse(text);
    if (!js.is_object()) throw Error(ErrorCode::kParse, "feature space must be an object");
    space.names_.assign(js.size(), "");
    std::vector<bool> seen(js.size(), false);
    for (const auto &[name, jid] : js.items()) {
      const int64_t id = jid.get<int64_t>();
      if (id < 0 || id >= static_cast<int64_t>(js.size()) || seen[id]) {
        throw Error(ErrorCode::kValidation, "feature ids are not dense");
      }
      seen[id] = true;
      space.names_[id] = name;
      space.ids_.emplace(name, static_cast<int>(id));
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("bad feature space: ") + e.what());
  }
  space.frozen_ = true;
  return space;
}

void FeatureVector::Validate() const {
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].first <= entries[i - 1].first) {
      throw InvalidArgument("feature ids are not strictly increasing");
    }
    if (entries[i].first < 0) throw InvalidArgument("negative feature id");
    if (!std::isfinite(entries[i].second)) {
      throw InvalidArgument("feature " + std::to_string(entries[i].first) +
                            " has a non-finite value");
    }
  }
}

FeatureVector ToVector(const NamedFeatures &named, FeatureSpace &space) {
  FeatureVector v;
  v.entries.reserve(named.size());
  for (const auto &[name, value] : named) {
    if (auto id = space.Intern(name)) v.entries.emplace_back(*id, value);
  }
  std::sort(v.entries.begin(), v.entries.end());
  return v;
}

FeatureVector ToVector(const NamedFeatures &named, const FeatureSpace &space) {
  FeatureVector v;
  v.entries.reserve(named.size());
  for (const auto &[name, value] : named) {
    if (auto id = space.Find(name)) v.entries.emplace_back(*id, value);
  }
  std::sort(v.entries.begin(), v.entries.end());
  return v;
}

void BigramLanguageModel::AddSequence(const std::vector<std::string> &events) {
  for (size_t i = 0; i < events.size(); ++i) {
    ++unigrams_[events[i]];
    if (i + 1 < events.size()) ++bigrams_[{events[i], events[i + 1]}];
  }
}

int64_t BigramLanguageModel::Count(std::string_view e) const {
  auto it = unigrams_.find(e);
  return it == unigrams_.end() ? 0 : it->second;
}

int64_t BigramLanguageModel::Count(std::string_view prev,
                                   std::string_view next) const {
  auto it = bigrams_.find({std::string(prev), std::string(next)});
  return it == bigrams_.end() ? 0 : it->second;
}

bool BigramLanguageModel::Contains(std::string_view e) const {
  return unigrams_.find(e) != unigrams_.end();
}

double Perplexity(const std::vector<std::string> &events,
                  const BigramLanguageModel &lm,
                  const PerplexityOptions &opts) {
  const size_t n = events.size();
  if (n < 2) throw InvalidArgument("perplexity needs at least two events");
  size_t vocab = lm.vocab_size();
  if (opts.smoothing) {
    std::set<std::string_view> unseen;
    for (const std::string &e : events) {
      if (!lm.Contains(e)) unseen.insert(e);
    }
    vocab += unseen.size();
  }
  double neg_log = 0.0;
  for (size_t i = 1; i < n; ++i) {
    const double joint = static_cast<double>(lm.Count(events[i - 1], events[i]));
    const double prev = static_cast<double>(lm.Count(events[i - 1]));
    double p;
    if (opts.smoothing) {
      p = (joint + 1.0) / (prev + static_cast<double>(vocab));
    } else {
      if (joint <= 0.0 || prev <= 0.0) {
        throw UndefinedScoreError("zero bigram probability for (" +
                                  events[i - 1] + ", " + events[i] + ")");
      }
      p = joint / prev;
    }
    neg_log -= std::log(p);
  }
  return std::exp(neg_log / static_cast<double>(n));
}

LexiconDictionary LexiconDictionary::Parse(std::string_view text) {
  LexiconDictionary dict;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kParse,
                  "lexicon line " + std::to_string(line_no) + ": missing tab");
    }
    const std::string category(Trim(std::string_view(line).substr(0, tab)));
    if (category.empty()) {
      throw Error(ErrorCode::kParse,
                  "lexicon line " + std::to_string(line_no) + ": empty category");
    }
    auto &patterns = dict.categories_[category];
    std::stringstream rest(line.substr(tab + 1));
    std::string pattern;
    while (std::getline(rest, pattern, ',')) {
      std::string p = Lowercase(Trim(pattern));
      if (!p.empty()) patterns.push_back(std::move(p));
    }
  }
  if (dict.categories_.empty()) {
    throw Error(ErrorCode::kValidation, "lexicon has no categories");
  }
  return dict;
}

LexiconDictionary LexiconDictionary::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open lexicon '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

std::vector<std::string> LexiconDictionary::Match(std::string_view word) const {
  const std::string w = Lowercase(word);
  std::vector<std::string> out;
  for (const auto &[category, patterns] : categories_) {
    for (const std::string &p : patterns) {
      if (PatternMatches(p, w)) {
        out.push_back(category);
        break;
      }
    }
  }
  return out;
}

NamedFeatures RuleFeatures(const ParagraphRecord &p) {
  NamedFeatures f;
  for (const SentenceAnnotation &s : p.sentences) {
    for (const ProductionRule &r : ExtractProductionRules(s.tree)) {
      f["rule:" + r.Key()] += 1.0;
    }
  }
  return f;
}

NamedFeatures PosFeatures(const ParagraphRecord &p) {
  NamedFeatures f;
  for (const SentenceAnnotation &s : p.sentences) {
    for (const Token &t : s.tokens) f["pos:" + t.pos] += 1.0;
  }
  return f;
}

NamedFeatures LexiconFeatures(const ParagraphRecord &p,
                              const LexiconDictionary &dict) {
  NamedFeatures f;
  for (const auto &entry : dict.categories()) f["liwc:" + entry.first] = 0.0;
  for (const SentenceAnnotation &s : p.sentences) {
    for (const Token &t : s.tokens) {
      for (const std::string &c : dict.Match(t.text)) f["liwc:" + c] += 1.0;
    }
  }
  return f;
}

std::array<double, 6> ProtagonistFeatures(const ParagraphWindow &window,
                                          ChainMatch match) {
  std::array<double, 6> out{};
  const ParagraphRecord &target = *window.target;
  if (target.sentences.empty()) return out;

  auto own = QualifyingChains(target);
  for (size_t i = 0; i < 3 && i < own.size(); ++i) {
    out[i] = ChainNormLength(own[i], target.sentences.size());
  }

  struct Merged {
    size_t mentions = 0;
    bool qualifying = false;
  };
  std::map<std::string, Merged> merged;
  size_t window_sentences = 0;
  for (const ParagraphRecord *p : {window.prev, window.target, window.next}) {
    if (!p) continue;
    window_sentences += p->sentences.size();
    for (const EntityChain &c : p->chains) {
      if (c.mentions.empty()) continue;
      Merged &m = merged[ChainKey(*p, c, match)];
      m.mentions += c.mentions.size();
      m.qualifying = m.qualifying || IsQualifyingChain(*p, c);
    }
  }
  std::vector<size_t> lengths;
  for (const auto &[key, m] : merged) {
    if (m.qualifying) lengths.push_back(m.mentions);
  }
  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  for (size_t i = 0; i < 3 && i < lengths.size(); ++i) {
    out[3 + i] = static_cast<double>(lengths[i]) /
                 static_cast<double>(window_sentences);
  }
  return out;
}

NamedFeatures NamedParagraphFeatures(const ParagraphWindow &window,
                                     const FeatureContext &ctx) {
  const ParagraphRecord &p = *window.target;
  NamedFeatures f = RuleFeatures(p);
  for (const auto &[k, v] : PosFeatures(p)) f[k] = v;
  if (ctx.lexicon) {
    for (const auto &[k, v] : LexiconFeatures(p, *ctx.lexicon)) f[k] = v;
  }
  const auto chains = ProtagonistFeatures(window, ctx.chain_match);
  for (size_t i = 0; i < chains.size(); ++i) {
    f["chain:" + std::to_string(i + 1)] = chains[i];
  }
  if (ctx.lm) {
    const std::vector<std::string> events = ExtractEventSequence(p).Canonical();
    if (events.size() >= 2) f["pp"] = Perplexity(events, *ctx.lm, ctx.perplexity);
  }
  return f;
}

FeatureVector Assemble(const ParagraphWindow &window, const FeatureContext &ctx,
                       FeatureSpace &space) {
  FeatureVector v = ToVector(NamedParagraphFeatures(window, ctx), space);
  v.Validate();
  return v;
}

}  // namespace narrev
