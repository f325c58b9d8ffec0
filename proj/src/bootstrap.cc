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


#include "narrev/bootstrap.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "narrev/error.h"
#include "narrev/events.h"
#include "narrev/logging.h"
#include "narrev/parallel.h"

namespace narrev {

using json = nlohmann::json;

namespace {

json IterationJson(const IterationStats &s) {
  json js;
  js["iteration"] = s.iteration;
  js["threshold"] = s.threshold;
  js["positives"] = s.positives;
  js["negatives"] = s.negatives;
  js["candidates_scored"] = s.candidates_scored;
  js["new_narratives"] = s.accepted;
  js["learned_total"] = s.learned_total;
  js["negatives_exhausted"] = s.negatives_exhausted;
  return js;
}

void WriteFile(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

std::string Lines(const std::vector<std::string> &items) {
  std::string out;
  for (const std::string &s : items) {
    out += s;
    out += '\n';
  }
  return out;
}

}  // namespace

void BootstrapConfig::Validate() const {
  if (!(initial_threshold > 0.0 && initial_threshold <= 1.0)) {
    throw InvalidArgument("initial threshold must be in (0, 1]");
  }
  if (!(threshold_increment >= 0.0)) {
    throw InvalidArgument("threshold increment must be non-negative");
  }
  if (neg_ratio == 0) throw InvalidArgument("negative ratio must be positive");
  if (max_iterations == 0) throw InvalidArgument("max iterations must be positive");
  if (!(train.l2_c > 0.0)) throw InvalidArgument("l2_c must be positive");
}

std::string BootstrapReport::StatsJson() const {
  json js;
  js["seeds"] = seed_ids.size();
  js["iterations"] = json::array();
  for (const IterationStats &s : iterations) js["iterations"].push_back(IterationJson(s));
  js["total"] = learned_ids.size();
  return js.dump(2);
}

CorpusProfiles ProfileCorpus(const Corpus &corpus, const RuleInventory &inv,
                             const NarrativeThresholds &thresholds,
                             size_t workers) {
  const size_t n = corpus.paragraph_count();
  CorpusProfiles out;
  out.profiles = ParallelMap<ParagraphProfile>(
      n, workers, [&](size_t i) { return ProfileParagraph(corpus.paragraph(i), inv); });
  out.seed.resize(n);
  out.candidate.resize(n);
  out.negative.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const ParagraphProfile &p = out.profiles[i];
    out.seed[i] = IsSeedNarrative(p, thresholds);
    out.candidate[i] = IsCandidate(p, thresholds);
    out.negative[i] = !out.seed[i] && IsSeedNegative(p, thresholds);
  }
  return out;
}

NegativeSample SampleNegatives(size_t available, size_t n_pos, size_t neg_ratio,
                               Rng &rng) {
  if (available == 0) throw InvalidArgument("no negative examples available");
  const size_t want = n_pos * neg_ratio;
  NegativeSample out;
  out.exhausted = available < want;
  out.indices = rng.Sample(available, std::min(want, available));
  return out;
}

BigramLanguageModel RebuildLanguageModel(
    const std::vector<const ParagraphRecord *> &paragraphs) {
  BigramLanguageModel lm;
  for (const ParagraphRecord *p : paragraphs) {
    lm.AddSequence(ExtractEventSequence(*p).Canonical());
  }
  return lm;
}

BootstrapReport RunBootstrap(const BootstrapInputs &inputs,
                             const BootstrapConfig &cfg) {
  if (inputs.corpus == nullptr || inputs.rules == nullptr) {
    throw InvalidArgument("bootstrap needs a corpus and a rule inventory");
  }
  cfg.Validate();
  const Corpus &corpus = *inputs.corpus;
  const size_t n = corpus.paragraph_count();
  const size_t workers = ResolveWorkers(cfg.workers);

  CorpusProfiles profiles = ProfileCorpus(corpus, *inputs.rules, cfg.thresholds, workers);
  std::vector<bool> learned(n, false);
  if (inputs.seed_ids) {
    for (const std::string &id : *inputs.seed_ids) {
      auto idx = corpus.Find(id);
      if (!idx) throw Error(ErrorCode::kValidation, "unknown seed paragraph " + id);
      learned[*idx] = true;
    }
  } else {
    learned = profiles.seed;
  }

  BootstrapReport report;
  for (size_t i = 0; i < n; ++i) {
    if (learned[i]) report.seed_ids.push_back(corpus.paragraph(i).Id());
  }
  if (report.seed_ids.empty()) throw Error(ErrorCode::kRuntime, "empty seed set");
  std::sort(report.seed_ids.begin(), report.seed_ids.end());
  Log().info("bootstrap: {} paragraphs, {} seeds", n, report.seed_ids.size());

  // Features that do not depend on the language model are computed once.
  FeatureContext base_ctx;
  base_ctx.lexicon = inputs.lexicon;
  base_ctx.chain_match = cfg.chain_match;
  std::vector<NamedFeatures> static_features = ParallelMap<NamedFeatures>(
      n, workers, [&](size_t i) { return NamedParagraphFeatures(corpus.window(i), base_ctx); });
  std::vector<std::vector<std::string>> events = ParallelMap<std::vector<std::string>>(
      n, workers, [&](size_t i) { return ExtractEventSequence(corpus.paragraph(i)).Canonical(); });

  Rng rng(cfg.rng_seed);
  for (size_t k = 0; k < cfg.max_iterations; ++k) {
    IterationStats stats;
    stats.iteration = k;
    stats.threshold = cfg.ThresholdAt(k);
    if (stats.threshold > 1.0 + 1e-12) {
      Log().info("bootstrap: threshold {} exceeds 1, stopping", stats.threshold);
      break;
    }

    std::vector<size_t> positives;
    std::vector<size_t> pool;
    std::vector<size_t> remaining;
    for (size_t i = 0; i < n; ++i) {
      if (learned[i]) {
        positives.push_back(i);
      } else {
        if (profiles.negative[i]) pool.push_back(i);
        if (profiles.candidate[i]) remaining.push_back(i);
      }
    }

    BigramLanguageModel lm;
    for (size_t i : positives) lm.AddSequence(events[i]);
    auto with_pp = [&](size_t i) {
      NamedFeatures f = static_features[i];
      if (events[i].size() >= 2) f["pp"] = Perplexity(events[i], lm);
      return f;
    };

    if (pool.empty()) throw Error(ErrorCode::kRuntime, "no negative examples available");
    NegativeSample sample = SampleNegatives(pool.size(), positives.size(), cfg.neg_ratio, rng);
    std::vector<size_t> negatives;
    for (size_t j : sample.indices) negatives.push_back(pool[j]);
    std::sort(negatives.begin(), negatives.end());
    stats.negatives_exhausted = sample.exhausted;
    if (sample.exhausted) {
      Log().warn("bootstrap iteration {}: only {} negatives for {} positives", k,
                 negatives.size(), positives.size());
    }

    std::vector<NamedFeatures> pos_named = ParallelMap<NamedFeatures>(
        positives.size(), workers, [&](size_t j) { return with_pp(positives[j]); });
    std::vector<NamedFeatures> neg_named = ParallelMap<NamedFeatures>(
        negatives.size(), workers, [&](size_t j) { return with_pp(negatives[j]); });
    FeatureSpace space;
    std::vector<FeatureVector> pos_x;
    std::vector<FeatureVector> neg_x;
    for (const NamedFeatures &f : pos_named) pos_x.push_back(ToVector(f, space));
    for (const NamedFeatures &f : neg_named) neg_x.push_back(ToVector(f, space));
    space.Freeze();

    stats.model = Train(pos_x, neg_x, space, cfg.train);
    stats.positives = positives.size();
    stats.negatives = negatives.size();
    stats.candidates_scored = remaining.size();

    const FeatureSpace &frozen = stats.model.space();
    std::vector<double> probs = ParallelMap<double>(remaining.size(), workers, [&](size_t j) {
      return stats.model.PredictProb(ToVector(with_pp(remaining[j]), frozen));
    });
    for (size_t j = 0; j < remaining.size(); ++j) {
      if (probs[j] >= stats.threshold) {
        learned[remaining[j]] = true;
        stats.accepted_ids.push_back(corpus.paragraph(remaining[j]).Id());
      }
    }
    std::sort(stats.accepted_ids.begin(), stats.accepted_ids.end());
    stats.accepted = stats.accepted_ids.size();
    stats.learned_total = positives.size() + stats.accepted;
    Log().info("bootstrap iteration {}: threshold {:.2f}, {} new, {} total", k,
               stats.threshold, stats.accepted, stats.learned_total);
    const bool stop = stats.accepted < cfg.min_new_narratives;
    report.iterations.push_back(std::move(stats));
    if (stop) break;
  }

  for (size_t i = 0; i < n; ++i) {
    if (learned[i]) report.learned_ids.push_back(corpus.paragraph(i).Id());
  }
  std::sort(report.learned_ids.begin(), report.learned_ids.end());
  return report;
}

void WriteBootstrapArtifacts(const BootstrapReport &report, const std::string &dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir + ": " + ec.message());
  for (const IterationStats &s : report.iterations) {
    const fs::path sub = root / ("iter_" + std::to_string(s.iteration));
    fs::create_directories(sub, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + sub.string());
    WriteFile(sub / "model.json", s.model.ToJson() + "\n");
    WriteFile(sub / "accepted.txt", Lines(s.accepted_ids));
    WriteFile(sub / "stats.json", IterationJson(s).dump(2) + "\n");
  }
  WriteFile(root / "seeds.txt", Lines(report.seed_ids));
  WriteFile(root / "narratives.txt", Lines(report.learned_ids));
  WriteFile(root / "stats.json", report.StatsJson() + "\n");
}

}  // namespace narrev
