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


#include "narrev/cloze.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"
#include "narrev/error.h"
#include "narrev/parallel.h"

namespace narrev {

using json = nlohmann::json;

namespace {

int64_t Unordered(const EventCountTable &t, std::string_view a, std::string_view b,
                  int d) {
  if (a == b) return t.Cooc(a, a, d);
  return t.Cooc(a, b, d) + t.Cooc(b, a, d);
}

ClozeScorer PmiScorer(const EventCountTable &t, const ClozeConfig &cfg) {
  return [&t, cfg](const std::vector<std::string> &context, const std::string &cand) {
    return ScoreCandidate(t, context, cand, cfg);
  };
}

}  // namespace

void ClozeQuestion::Validate() const {
  if (candidates.size() != kClozeCandidates) {
    throw InvalidArgument("a cloze question needs exactly 5 candidates");
  }
  if (answer_index >= candidates.size()) throw InvalidArgument("answer index out of range");
  std::set<std::string_view> seen(candidates.begin(), candidates.end());
  if (seen.size() != candidates.size()) throw InvalidArgument("cloze candidates repeat");
}

void ClozeConfig::Validate() const {
  if (runs == 0) throw InvalidArgument("cloze runs must be at least 1");
  if (!std::isfinite(unseen_value)) throw InvalidArgument("unseen value must be finite");
}

std::vector<ClozeQuestion> GenerateQuestions(
    const std::vector<std::vector<std::string>> &seqs,
    const std::vector<std::string> &vocab, Rng &rng) {
  std::vector<std::string> sorted_vocab = vocab;
  std::sort(sorted_vocab.begin(), sorted_vocab.end());
  sorted_vocab.erase(std::unique(sorted_vocab.begin(), sorted_vocab.end()),
                     sorted_vocab.end());
  if (sorted_vocab.size() < kClozeCandidates) {
    throw InvalidArgument("cloze vocabulary has " + std::to_string(sorted_vocab.size()) +
                          " events; at least 5 are needed");
  }
  std::vector<ClozeQuestion> out;
  out.reserve(seqs.size());
  for (size_t s = 0; s < seqs.size(); ++s) {
    const auto &seq = seqs[s];
    if (seq.size() < 2) {
      throw InvalidArgument("cloze sequence " + std::to_string(s) + " has fewer than 2 events");
    }
    ClozeQuestion q;
    q.context.assign(seq.begin(), seq.end() - 1);
    const std::string &gold = seq.back();
    std::set<std::string_view> excluded(q.context.begin(), q.context.end());
    excluded.insert(gold);
    std::vector<const std::string *> pool;
    for (const std::string &e : sorted_vocab) {
      if (!excluded.count(e)) pool.push_back(&e);
    }
    if (pool.size() < kClozeCandidates - 1) {
      throw InvalidArgument("cloze sequence " + std::to_string(s) +
                            ": fewer than 4 distractors after exclusions");
    }
    q.candidates.push_back(gold);
    for (size_t j : rng.Sample(pool.size(), kClozeCandidates - 1)) {
      q.candidates.push_back(*pool[j]);
    }
    rng.Shuffle(q.candidates);
    q.answer_index = static_cast<size_t>(
        std::find(q.candidates.begin(), q.candidates.end(), gold) - q.candidates.begin());
    out.push_back(std::move(q));
  }
  return out;
}

double ClozePmi(const EventCountTable &t, std::string_view a, std::string_view b,
                const ClozeConfig &cfg) {
  const double ca = static_cast<double>(t.Unigram(a));
  const double cb = static_cast<double>(t.Unigram(b));
  if (ca <= 0 || cb <= 0) return cfg.unseen_value;
  const double total = static_cast<double>(t.UnigramTotal());
  const double pa = ca / total;
  const double pb = cb / total;
  if (cfg.mode == ClozePmiMode::kAggregated) {
    int64_t joint = 0;
    int64_t pairs = 0;
    for (int d = 1; d <= kMaxDistance; ++d) {
      joint += Unordered(t, a, b, d);
      pairs += t.BucketTotal(d);
    }
    if (joint == 0) return cfg.unseen_value;
    const double p = static_cast<double>(joint) / static_cast<double>(pairs);
    return std::log(p / (pa * pb));
  }
  double sum = 0.0;
  bool any = false;
  for (int d = 1; d <= kMaxDistance; ++d) {
    const int64_t joint = Unordered(t, a, b, d);
    if (joint == 0) continue;
    const double p = static_cast<double>(joint) / static_cast<double>(t.BucketTotal(d));
    sum += std::log(p / (pa * pb)) / d;
    any = true;
  }
  return any ? sum : cfg.unseen_value;
}

double ScoreCandidate(const EventCountTable &t,
                      const std::vector<std::string> &context,
                      std::string_view cand, const ClozeConfig &cfg) {
  double s = 0.0;
  for (const std::string &e : context) s += ClozePmi(t, e, cand, cfg);
  return s;
}

size_t Answer(const ClozeQuestion &q, const ClozeScorer &scorer) {
  size_t best = 0;
  double best_score = 0.0;
  for (size_t i = 0; i < q.candidates.size(); ++i) {
    const double s = scorer(q.context, q.candidates[i]);
    if (i == 0 || s > best_score ||
        (s == best_score && q.candidates[i] < q.candidates[best])) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

std::string ClozeReport::ToJson() const {
  json js;
  js["mean"] = mean;
  js["runs"] = runs;
  return js.dump();
}

double Accuracy(const std::vector<ClozeQuestion> &questions,
                const ClozeScorer &scorer, size_t workers) {
  if (questions.empty()) return 0.0;
  std::vector<char> correct = ParallelMap<char>(questions.size(), workers, [&](size_t i) {
    return static_cast<char>(Answer(questions[i], scorer) == questions[i].answer_index);
  });
  size_t hits = 0;
  for (char c : correct) hits += c ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(questions.size());
}

ClozeReport Evaluate(const std::vector<std::vector<std::string>> &seqs,
                     const std::vector<std::string> &vocab,
                     const ClozeScorer &scorer, const ClozeConfig &cfg) {
  cfg.Validate();
  ClozeReport report;
  for (size_t r = 0; r < cfg.runs; ++r) {
    Rng rng(DeriveSeed(cfg.rng_seed, r));
    report.runs.push_back(Accuracy(GenerateQuestions(seqs, vocab, rng), scorer, cfg.workers));
  }
  double sum = 0.0;
  for (double a : report.runs) sum += a;
  report.mean = sum / static_cast<double>(report.runs.size());
  return report;
}

ClozeReport Evaluate(const EventCountTable &t,
                     const std::vector<std::vector<std::string>> &seqs,
                     const ClozeConfig &cfg) {
  std::vector<std::string> vocab;
  for (const auto &[e, c] : t.unigrams()) vocab.push_back(e);
  return Evaluate(seqs, vocab, PmiScorer(t, cfg), cfg);
}

ClozeReport Evaluate(const EventCountTable &t,
                     const std::vector<ClozeQuestion> &questions,
                     const ClozeConfig &cfg) {
  cfg.Validate();
  for (const ClozeQuestion &q : questions) q.Validate();
  ClozeReport report;
  report.runs.push_back(Accuracy(questions, PmiScorer(t, cfg), cfg.workers));
  report.mean = report.runs.front();
  return report;
}

std::string QuestionToJson(const ClozeQuestion &q) {
  json js;
  js["context"] = q.context;
  js["candidates"] = q.candidates;
  js["answer"] = q.answer_index;
  return js.dump();
}

ClozeQuestion QuestionFromJson(std::string_view line) {
  ClozeQuestion q;
  try {
    json js = json::parse(line);
    q.context = js.at("context").get<std::vector<std::string>>();
    q.candidates = js.at("candidates").get<std::vector<std::string>>();
    const int64_t answer = js.at("answer").get<int64_t>();
    if (answer < 0) throw InvalidArgument("negative answer index");
    q.answer_index = static_cast<size_t>(answer);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("bad cloze question: ") + e.what());
  }
  q.Validate();
  return q;
}

std::vector<ClozeQuestion> LoadQuestions(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::vector<ClozeQuestion> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(QuestionFromJson(line));
    } catch (const Error &e) {
      throw Error(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace narrev
