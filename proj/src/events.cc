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

#include "narrev/events.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "narrev/error.h"
#include "narrev/rules.h"

namespace narrev {

using json = nlohmann::json;

namespace {

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsEventTag(std::string_view tag) {
  return tag == "VB" || tag == "VBP" || tag == "VBZ" || tag == "VBD";
}

bool IsConjoinedClause(const ParseTree &clause) {
  if (clause.label() != "S") return false;
  const auto labels = ContentChildLabels(clause);
  static const std::vector<std::string> kCoord = {"S", "CC", "S"};
  static const std::vector<std::string> kCoordPrn = {"S", "PRN", "CC", "S"};
  return labels == kCoord || labels == kCoordPrn;
}

void MainVps(const ParseTree &clause, std::vector<const ParseTree *> *out) {
  if (clause.is_leaf()) return;
  if (clause.label() == "VP") {
    out->push_back(&clause);
    return;
  }
  if (IsConjoinedClause(clause)) {
    for (const ParseTree &c : clause.children()) {
      if (c.label() == "S") MainVps(c, out);
    }
    return;
  }
  for (const ParseTree &c : clause.children()) {
    if (c.label() == "VP") {
      out->push_back(&c);
      return;
    }
  }
}

void CollectHeads(const ParseTree &vp, bool split, std::vector<HeadVerb> *out) {
  for (const ParseTree &c : vp.children()) {
    if (c.is_leaf() && IsVerbTag(c.label())) {
      out->push_back(HeadVerb{&c, &vp, c.label(), *c.terminal()});
      return;
    }
  }
  for (const ParseTree &c : vp.children()) {
    if (c.label() != "VP") continue;
    CollectHeads(c, split, out);
    if (!split) return;
  }
}

std::string FindParticle(const ParseTree &vp) {
  for (const ParseTree &c : vp.children()) {
    if (c.is_leaf() && c.label() == "RP") return Lowercase(*c.terminal());
    if (c.label() == "PRT") {
      for (const ParseTree &g : c.children()) {
        if (g.is_leaf() && g.label() == "RP") return Lowercase(*g.terminal());
      }
    }
  }
  return "";
}

double Log(double x) { return std::log(x); }

int64_t UnorderedCount(const EventCountTable &t, std::string_view a,
                       std::string_view b, int d) {
  if (a == b) return t.Cooc(a, b, d);
  return t.Cooc(a, b, d) + t.Cooc(b, a, d);
}

void CheckDistance(int d) {
  if (d < 1 || d > kMaxDistance) {
    throw InvalidArgument("distance must be in [1, 3], got " + std::to_string(d));
  }
}

std::string FormatDouble(double v) { return fmt::format("{:.6f}", v); }

}  // namespace

std::string EventToken::Canonical() const {
  if (particle.empty()) return lemma;
  return lemma + "_" + particle;
}

std::vector<std::string> EventSequence::Canonical() const {
  std::vector<std::string> out;
  out.reserve(events.size());
  for (const EventToken &e : events) out.push_back(e.Canonical());
  return out;
}

std::vector<EventToken> SentenceEvents(const SentenceAnnotation &sentence,
                                       const EventExtractionOptions &opts) {
  std::vector<const ParseTree *> vps;
  MainVps(UnwrapRoot(sentence.tree), &vps);
  std::vector<HeadVerb> heads;
  for (const ParseTree *vp : vps) {
    CollectHeads(*vp, opts.split_coordinated_vps, &heads);
    if (!opts.split_coordinated_vps && !heads.empty()) break;
  }
  std::vector<EventToken> events;
  for (const HeadVerb &h : heads) {
    if (!IsEventTag(h.pos)) continue;
    EventToken ev;
    auto leaf = LeafIndexOf(sentence.tree, *h.node);
    if (leaf && *leaf < sentence.tokens.size()) {
      ev.lemma = Lowercase(sentence.tokens[*leaf].lemma);
    }
    if (ev.lemma.empty()) ev.lemma = Lowercase(h.word);
    ev.particle = FindParticle(*h.vp);
    events.push_back(std::move(ev));
  }
  return events;
}

EventSequence ExtractEventSequence(const ParagraphRecord &p,
                                   const EventExtractionOptions &opts) {
  EventSequence seq;
  seq.paragraph_id = p.Id();
  for (const SentenceAnnotation &s : p.sentences) {
    for (EventToken &e : SentenceEvents(s, opts)) seq.events.push_back(std::move(e));
  }
  return seq;
}

void EventCountTable::AddSequence(const std::vector<std::string> &events) {
  for (size_t i = 0; i < events.size(); ++i) {
    ++unigrams_[events[i]];
    ++unigram_total_;
    for (int d = 1; d <= kMaxDistance && i + d < events.size(); ++d) {
      ++buckets_[d - 1][{events[i], events[i + d]}];
      ++bucket_totals_[d - 1];
    }
  }
}

void EventCountTable::Merge(const EventCountTable &other) {
  for (const auto &[e, c] : other.unigrams_) unigrams_[e] += c;
  unigram_total_ += other.unigram_total_;
  for (int d = 0; d < kMaxDistance; ++d) {
    for (const auto &[k, c] : other.buckets_[d]) buckets_[d][k] += c;
    bucket_totals_[d] += other.bucket_totals_[d];
  }
}

int64_t EventCountTable::Unigram(std::string_view e) const {
  auto it = unigrams_.find(std::string(e));
  return it == unigrams_.end() ? 0 : it->second;
}

int64_t EventCountTable::Cooc(std::string_view a, std::string_view b,
                              int d) const {
  CheckDistance(d);
  const auto &bucket = buckets_[d - 1];
  auto it = bucket.find(PairKey(std::string(a), std::string(b)));
  return it == bucket.end() ? 0 : it->second;
}

int64_t EventCountTable::BucketTotal(int d) const {
  CheckDistance(d);
  return bucket_totals_[d - 1];
}

const std::map<EventCountTable::PairKey, int64_t> &EventCountTable::bucket(
    int d) const {
  CheckDistance(d);
  return buckets_[d - 1];
}

std::string EventCountTable::ToJson() const {
  json uni = json::array();
  for (const auto &[e, c] : unigrams_) uni.push_back({e, c});
  json cooc = json::object();
  for (int d = 1; d <= kMaxDistance; ++d) {
    json rows = json::array();
    for (const auto &[k, c] : buckets_[d - 1]) rows.push_back({k.first, k.second, c});
    cooc[std::to_string(d)] = rows;
  }
  return json{{"unigrams", uni}, {"cooc", cooc}}.dump();
}

EventCountTable EventCountTable::FromJson(std::string_view text) {
  EventCountTable t;
  try {
    json js = json::parse(text);
    for (const json &row : js.at("unigrams")) {
      const int64_t c = row.at(1).get<int64_t>();
      if (c < 0) throw Error(ErrorCode::kValidation, "negative unigram count");
      t.unigrams_[row.at(0).get<std::string>()] += c;
      t.unigram_total_ += c;
    }
    const json &cooc = js.at("cooc");
    for (int d = 1; d <= kMaxDistance; ++d) {
      auto it = cooc.find(std::to_string(d));
      if (it == cooc.end()) continue;
      for (const json &row : *it) {
        const int64_t c = row.at(2).get<int64_t>();
        if (c < 0) throw Error(ErrorCode::kValidation, "negative pair count");
        t.buckets_[d - 1][{row.at(0).get<std::string>(),
                           row.at(1).get<std::string>()}] += c;
        t.bucket_totals_[d - 1] += c;
      }
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("bad count table: ") + e.what());
  }
  return t;
}

void EventCountTable::Save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << ToJson() << "\n";
}

EventCountTable EventCountTable::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open count table '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return FromJson(buf.str());
}

EventCountTable BuildCountTable(const std::vector<EventSequence> &seqs) {
  EventCountTable t;
  for (const EventSequence &s : seqs) t.AddSequence(s.Canonical());
  return t;
}

EventCountTable BuildCountTable(
    const std::vector<std::vector<std::string>> &seqs) {
  EventCountTable t;
  for (const auto &s : seqs) t.AddSequence(s);
  return t;
}

double Pmi(const EventCountTable &t, std::string_view a, std::string_view b,
           int d, const ScoringOptions &opts) {
  CheckDistance(d);
  const int64_t joint = opts.numerator == PmiNumerator::kUnordered
                            ? UnorderedCount(t, a, b, d)
                            : t.Cooc(a, b, d);
  const int64_t ca = t.Unigram(a);
  const int64_t cb = t.Unigram(b);
  if (joint <= 0 || ca <= 0 || cb <= 0) {
    throw UndefinedScoreError(fmt::format(
        "pmi_{}({}, {}) undefined: co-occurrence {}, unigrams {} and {}", d, a,
        b, joint, ca, cb));
  }
  const double p_joint =
      static_cast<double>(joint) / static_cast<double>(t.BucketTotal(d));
  const double total = static_cast<double>(t.UnigramTotal());
  const double p_a = static_cast<double>(ca) / total;
  const double p_b = static_cast<double>(cb) / total;
  return Log(p_joint / (p_a * p_b));
}

CpTerm CpD(const EventCountTable &t, std::string_view a, std::string_view b,
           int d, const ScoringOptions &opts) {
  const int64_t forward = t.Cooc(a, b, d);
  if (forward <= 0) {
    throw UndefinedScoreError(
        fmt::format("cp_{}({}, {}) undefined: {} never precedes {}", d, a, b, a, b));
  }
  const int64_t reverse = t.Cooc(b, a, d);
  CpTerm term;
  double ratio;
  if (reverse > 0) {
    ratio = static_cast<double>(forward) / static_cast<double>(reverse);
  } else {
    ratio = static_cast<double>(forward + 1) / static_cast<double>(reverse + 1);
    term.smoothed = true;
  }
  term.value = Pmi(t, a, b, d, opts) + Log(ratio);
  return term;
}

double ScoredPair::Recompute() const {
  double sum = 0.0;
  for (int d = 1; d <= kMaxDistance; ++d) {
    if (cp_d[d - 1]) sum += *cp_d[d - 1] / d;
  }
  return sum;
}

ScoredPair ScorePair(const EventCountTable &t, std::string_view a,
                     std::string_view b, const ScoringOptions &opts) {
  ScoredPair pair;
  pair.first = std::string(a);
  pair.second = std::string(b);
  pair.support = t.Cooc(a, b, 1);
  for (int d = 1; d <= kMaxDistance; ++d) {
    if (t.Cooc(a, b, d) <= 0) continue;
    CpTerm term = CpD(t, a, b, d, opts);
    pair.cp_d[d - 1] = term.value;
    pair.smoothed[d - 1] = term.smoothed;
  }
  pair.cp = pair.Recompute();
  return pair;
}

ScoredPair WeightedCp(const EventCountTable &t, std::string_view a,
                      std::string_view b, const ScoringOptions &opts) {
  if (t.Cooc(a, b, 1) <= 0) {
    throw InvalidArgument(fmt::format(
        "({}, {}) is not a candidate pair: never consecutive", a, b));
  }
  return ScorePair(t, a, b, opts);
}

double ChainFormula(const EventCountTable &t,
                    const std::vector<std::string> &chain,
                    const ScoringOptions &opts) {
  const size_t n = chain.size();
  if (n < 2) throw InvalidArgument("chain needs at least two events");
  double sum = 0.0;
  for (int d = 1; d <= kMaxDistance; ++d) {
    for (size_t j = 0; j + d < n; ++j) {
      sum += ScorePair(t, chain[j], chain[j + d], opts).cp / d;
    }
  }
  return sum / static_cast<double>(n - 1);
}

double ChainScore(const EventCountTable &t,
                  const std::vector<std::string> &chain,
                  const ScoringOptions &opts) {
  if (chain.size() < 3 || chain.size() > 5) {
    throw InvalidArgument("chain length must be in [3, 5], got " +
                          std::to_string(chain.size()));
  }
  for (size_t j = 0; j + 1 < chain.size(); ++j) {
    if (t.Cooc(chain[j], chain[j + 1], 1) <= 0) {
      throw InvalidArgument(fmt::format(
          "chain pair ({}, {}) never occurred consecutively", chain[j],
          chain[j + 1]));
    }
  }
  return ChainFormula(t, chain, opts);
}

std::vector<ScoredPair> RankPairs(const EventCountTable &t, double min_cp,
                                  const ScoringOptions &opts) {
  std::vector<ScoredPair> out;
  for (const auto &[key, count] : t.bucket(1)) {
    if (count <= 0) continue;
    ScoredPair pair = ScorePair(t, key.first, key.second, opts);
    if (pair.cp >= min_cp) out.push_back(std::move(pair));
  }
  std::sort(out.begin(), out.end(), [](const ScoredPair &x, const ScoredPair &y) {
    if (x.cp != y.cp) return x.cp > y.cp;
    if (x.support != y.support) return x.support > y.support;
    return std::tie(x.first, x.second) < std::tie(y.first, y.second);
  });
  return out;
}

std::vector<ScoredChain> RankChains(
    const EventCountTable &t, const std::vector<std::vector<std::string>> &seqs,
    const ChainOptions &chain_opts, const ScoringOptions &opts) {
  std::map<std::vector<std::string>, int64_t> segments;
  for (const auto &seq : seqs) {
    for (size_t len = chain_opts.min_length; len <= chain_opts.max_length; ++len) {
      for (size_t i = 0; i + len <= seq.size(); ++i) {
        ++segments[std::vector<std::string>(seq.begin() + i, seq.begin() + i + len)];
      }
    }
  }
  std::vector<ScoredChain> out;
  out.reserve(segments.size());
  for (const auto &[events, support] : segments) {
    ScoredChain chain;
    chain.events = events;
    chain.support = support;
    chain.score = ChainFormula(t, events, opts);
    out.push_back(std::move(chain));
  }
  std::sort(out.begin(), out.end(), [](const ScoredChain &x, const ScoredChain &y) {
    if (x.score != y.score) return x.score > y.score;
    if (x.support != y.support) return x.support > y.support;
    return x.events < y.events;
  });
  if (out.size() > chain_opts.max_out) out.resize(chain_opts.max_out);
  return out;
}

std::string FormatPairTsv(const ScoredPair &pair) {
  std::string line = pair.first + "\t" + pair.second + "\t" + FormatDouble(pair.cp);
  for (int d = 0; d < kMaxDistance; ++d) {
    line += "\t";
    line += pair.cp_d[d] ? FormatDouble(*pair.cp_d[d]) : "NA";
  }
  line += "\t" + std::to_string(pair.support);
  return line;
}

std::string FormatChainTsv(const ScoredChain &chain) {
  std::string line;
  for (size_t i = 0; i < chain.events.size(); ++i) {
    if (i > 0) line += ">";
    line += chain.events[i];
  }
  line += "\t" + FormatDouble(chain.score) + "\t" + std::to_string(chain.support);
  return line;
}

}  // namespace narrev
