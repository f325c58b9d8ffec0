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


#include "narrev/pipeline.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "narrev/error.h"
#include "narrev/logging.h"
#include "narrev/parallel.h"

namespace narrev {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Reads known keys out of a JSON object and rejects the rest.
class Fields {
 public:
  Fields(const json &js, std::string where) : js_(js), where_(std::move(where)) {
    if (!js_.is_object()) throw Error(ErrorCode::kValidation, where_ + " must be an object");
  }

  template <typename T>
  void Read(const char *key, T &out) {
    seen_.insert(key);
    auto it = js_.find(key);
    if (it == js_.end() || it->is_null()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception &) {
      throw Error(ErrorCode::kValidation, where_ + "." + key + " has the wrong type");
    }
  }

  const json *Object(const char *key) {
    seen_.insert(key);
    auto it = js_.find(key);
    if (it == js_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  void Finish() const {
    for (const auto &[key, value] : js_.items()) {
      if (!seen_.count(key)) {
        throw Error(ErrorCode::kValidation, where_ + ": unknown key '" + key + "'");
      }
    }
  }

 private:
  const json &js_;
  std::string where_;
  std::set<std::string> seen_;
};

std::string ReadText(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path &path, const std::string &text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

void RequirePath(const std::string &what, const std::string &path) {
  if (path.empty()) throw Error(ErrorCode::kValidation, what + " path is not set");
}

void RequireExisting(const std::string &what, const std::string &path) {
  if (!path.empty() && !fs::exists(path)) {
    throw Error(ErrorCode::kValidation, what + " path does not exist: " + path);
  }
}

Corpus OpenCorpus(const PipelineConfig &cfg) {
  RequirePath("corpus", cfg.corpus);
  return Corpus(LoadCorpus(cfg.corpus));
}

RuleInventory OpenRules(const PipelineConfig &cfg) {
  if (cfg.rules.empty()) return RuleInventory::Default();
  return RuleInventory::Load(cfg.rules);
}

std::string NarrativesPath(const PipelineConfig &cfg) {
  if (!cfg.narratives.empty()) return cfg.narratives;
  return (fs::path(cfg.out) / "bootstrap" / "narratives.txt").string();
}

// Event sequences of the listed paragraphs, in id order.
std::vector<EventSequence> NarrativeSequences(const PipelineConfig &cfg,
                                              const Corpus &corpus) {
  const std::string path = NarrativesPath(cfg);
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kValidation,
                "narrative list not found: " + path + " (run bootstrap or pass --narratives)");
  }
  std::vector<std::string> ids = ReadIdList(path);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<size_t> indices;
  for (const std::string &id : ids) {
    auto idx = corpus.Find(id);
    if (!idx) throw Error(ErrorCode::kValidation, "unknown paragraph id in " + path + ": " + id);
    indices.push_back(*idx);
  }
  return ParallelMap<EventSequence>(indices.size(), cfg.workers, [&](size_t i) {
    return ExtractEventSequence(corpus.paragraph(indices[i]));
  });
}

std::string ProfileColumns(const ParagraphProfile &p) {
  return fmt::format("{}\t{:.6f}\t{:.6f}\t{:.6f}", p.n_sentences, p.actantial_fraction,
                     p.non_declarative_fraction, p.longest_chain_norm);
}

ChainMatch ParseChainMatch(const std::string &s) {
  if (s == "id") return ChainMatch::kById;
  if (s == "head") return ChainMatch::kByHeadString;
  throw Error(ErrorCode::kValidation, "chain_match must be 'id' or 'head'");
}

ClozePmiMode ParseClozeMode(const std::string &s) {
  if (s == "aggregated") return ClozePmiMode::kAggregated;
  if (s == "distance_weighted") return ClozePmiMode::kDistanceWeighted;
  throw Error(ErrorCode::kValidation, "cloze mode must be 'aggregated' or 'distance_weighted'");
}

}  // namespace

PipelineConfig PipelineConfig::FromJson(std::string_view text) {
  json js;
  try {
    js = json::parse(text);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("bad config: ") + e.what());
  }
  PipelineConfig cfg;
  Fields top(js, "config");
  top.Read("corpus", cfg.corpus);
  top.Read("lexicon", cfg.lexicon);
  top.Read("rules", cfg.rules);
  top.Read("out", cfg.out);
  top.Read("seeds", cfg.seeds);
  top.Read("narratives", cfg.narratives);
  top.Read("questions", cfg.questions);
  top.Read("counts", cfg.counts);
  top.Read("workers", cfg.workers);
  top.Read("seed", cfg.seed);
  top.Read("log", cfg.log_level);
  if (const json *b = top.Object("bootstrap")) {
    Fields f(*b, "bootstrap");
    f.Read("initial_threshold", cfg.bootstrap.initial_threshold);
    f.Read("threshold_increment", cfg.bootstrap.threshold_increment);
    f.Read("min_new", cfg.bootstrap.min_new_narratives);
    f.Read("neg_ratio", cfg.bootstrap.neg_ratio);
    f.Read("max_iterations", cfg.bootstrap.max_iterations);
    f.Read("l2_c", cfg.bootstrap.train.l2_c);
    f.Read("max_train_iterations", cfg.bootstrap.train.max_iterations);
    f.Read("tolerance", cfg.bootstrap.train.tolerance);
    std::string match = "id";
    f.Read("chain_match", match);
    cfg.bootstrap.chain_match = ParseChainMatch(match);
    f.Finish();
  }
  if (const json *k = top.Object("knowledge")) {
    Fields f(*k, "knowledge");
    f.Read("min_cp", cfg.min_cp);
    f.Read("max_chains", cfg.chains.max_out);
    f.Read("min_chain_length", cfg.chains.min_length);
    f.Read("max_chain_length", cfg.chains.max_length);
    f.Finish();
  }
  if (const json *c = top.Object("cloze")) {
    Fields f(*c, "cloze");
    f.Read("runs", cfg.cloze.runs);
    f.Read("unseen_value", cfg.cloze.unseen_value);
    f.Read("holdout", cfg.cloze_holdout);
    std::string mode = "aggregated";
    f.Read("mode", mode);
    cfg.cloze.mode = ParseClozeMode(mode);
    f.Finish();
  }
  top.Finish();
  cfg.bootstrap.rng_seed = cfg.seed;
  cfg.bootstrap.workers = cfg.workers;
  cfg.cloze.rng_seed = cfg.seed;
  cfg.cloze.workers = cfg.workers;
  return cfg;
}

std::string PipelineConfig::ToJson() const {
  json js;
  js["corpus"] = corpus;
  js["lexicon"] = lexicon;
  js["rules"] = rules;
  js["out"] = out;
  js["seeds"] = seeds;
  js["narratives"] = narratives;
  js["questions"] = questions;
  js["counts"] = counts;
  js["workers"] = workers;
  js["seed"] = seed;
  js["log"] = log_level;
  js["bootstrap"] = {
      {"initial_threshold", bootstrap.initial_threshold},
      {"threshold_increment", bootstrap.threshold_increment},
      {"min_new", bootstrap.min_new_narratives},
      {"neg_ratio", bootstrap.neg_ratio},
      {"max_iterations", bootstrap.max_iterations},
      {"l2_c", bootstrap.train.l2_c},
      {"max_train_iterations", bootstrap.train.max_iterations},
      {"tolerance", bootstrap.train.tolerance},
      {"chain_match", bootstrap.chain_match == ChainMatch::kById ? "id" : "head"}};
  js["knowledge"] = {{"min_cp", min_cp},
                     {"max_chains", chains.max_out},
                     {"min_chain_length", chains.min_length},
                     {"max_chain_length", chains.max_length}};
  js["cloze"] = {
      {"runs", cloze.runs},
      {"unseen_value", cloze.unseen_value},
      {"holdout", cloze_holdout},
      {"mode", cloze.mode == ClozePmiMode::kAggregated ? "aggregated" : "distance_weighted"}};
  return js.dump(2);
}

void PipelineConfig::Validate() const {
  try {
    bootstrap.Validate();
    cloze.Validate();
  } catch (const Error &e) {
    throw Error(ErrorCode::kValidation, e.what());
  }
  if (!std::isfinite(min_cp)) throw Error(ErrorCode::kValidation, "min_cp must be finite");
  if (chains.min_length < 2 || chains.min_length > chains.max_length) {
    throw Error(ErrorCode::kValidation, "chain lengths must satisfy 2 <= min <= max");
  }
  if (!(cloze_holdout > 0.0 && cloze_holdout < 1.0)) {
    throw Error(ErrorCode::kValidation, "cloze holdout must be in (0, 1)");
  }
  if (out.empty()) throw Error(ErrorCode::kValidation, "output directory is not set");
  RequireExisting("corpus", corpus);
  RequireExisting("lexicon", lexicon);
  RequireExisting("rules", rules);
  RequireExisting("seeds", seeds);
  RequireExisting("narratives", narratives);
  RequireExisting("questions", questions);
  RequireExisting("counts", counts);
}

std::vector<std::string> ReadIdList(const std::string &path) {
  std::istringstream in(ReadText(path));
  std::vector<std::string> ids;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string id = line.substr(0, line.find('\t'));
    const bool header = first && id == "id";
    first = false;
    if (header || id.empty() || id.front() == '#') continue;
    ids.push_back(std::move(id));
  }
  return ids;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
    case ErrorCode::kValidation:
      return 1;
    default:
      return 2;
  }
}

CommandResult RunValidate(const PipelineConfig &cfg) {
  RequirePath("corpus", cfg.corpus);
  CorpusReader reader(cfg.corpus, OnBadRecord::kSkip);
  size_t docs = 0, paragraphs = 0, sentences = 0, tokens = 0;
  std::set<std::string> ids;
  json errors = json::array();
  while (auto doc = reader.Next()) {
    ++docs;
    for (const ParagraphRecord &p : doc->paragraphs) {
      ++paragraphs;
      if (!ids.insert(p.Id()).second) {
        errors.push_back({{"line", reader.lines_read()},
                          {"doc_id", doc->doc_id},
                          {"message", "duplicate paragraph id " + p.Id()}});
      }
      sentences += p.sentences.size();
      for (const SentenceAnnotation &s : p.sentences) tokens += s.tokens.size();
    }
  }
  for (const CorpusIssue &issue : reader.issues()) {
    errors.push_back({{"line", issue.line}, {"doc_id", issue.doc_id}, {"message", issue.message}});
  }
  json report = {{"lines", reader.lines_read()}, {"documents", docs},
                 {"paragraphs", paragraphs},    {"sentences", sentences},
                 {"tokens", tokens},            {"errors", errors}};
  return {errors.empty() ? 0 : 1, report.dump(2)};
}

CommandResult RunSeed(const PipelineConfig &cfg) {
  const Corpus corpus = OpenCorpus(cfg);
  const RuleInventory rules = OpenRules(cfg);
  const CorpusProfiles prof =
      ProfileCorpus(corpus, rules, cfg.bootstrap.thresholds, cfg.workers);
  std::string seeds = "id\tn_sentences\tactantial\tnon_declarative\tchain\n";
  std::string all =
      "id\tn_sentences\tactantial\tnon_declarative\tchain\tseed\tcandidate\tnegative\n";
  size_t n_seed = 0, n_cand = 0, n_neg = 0;
  for (size_t i = 0; i < corpus.paragraph_count(); ++i) {
    const std::string id = corpus.paragraph(i).Id();
    const std::string cols = ProfileColumns(prof.profiles[i]);
    if (prof.seed[i]) {
      seeds += id + "\t" + cols + "\n";
      ++n_seed;
    }
    n_cand += prof.candidate[i] ? 1 : 0;
    n_neg += prof.negative[i] ? 1 : 0;
    all += fmt::format("{}\t{}\t{:d}\t{:d}\t{:d}\n", id, cols, prof.seed[i] ? 1 : 0,
                       prof.candidate[i] ? 1 : 0, prof.negative[i] ? 1 : 0);
  }
  const fs::path dir = fs::path(cfg.out) / "seed";
  WriteText(dir / "seeds.tsv", seeds);
  WriteText(dir / "profiles.tsv", all);
  json report = {{"paragraphs", corpus.paragraph_count()},
                 {"seeds", n_seed},
                 {"candidates", n_cand},
                 {"negatives", n_neg},
                 {"seeds_file", (dir / "seeds.tsv").string()}};
  return {0, report.dump(2)};
}

CommandResult RunBootstrapCommand(const PipelineConfig &cfg) {
  const Corpus corpus = OpenCorpus(cfg);
  const RuleInventory rules = OpenRules(cfg);
  std::optional<LexiconDictionary> lexicon;
  if (!cfg.lexicon.empty()) lexicon = LexiconDictionary::Load(cfg.lexicon);
  BootstrapInputs inputs;
  inputs.corpus = &corpus;
  inputs.rules = &rules;
  inputs.lexicon = lexicon ? &*lexicon : nullptr;
  if (!cfg.seeds.empty()) inputs.seed_ids = ReadIdList(cfg.seeds);
  const BootstrapReport report = RunBootstrap(inputs, cfg.bootstrap);
  WriteBootstrapArtifacts(report, (fs::path(cfg.out) / "bootstrap").string());
  return {0, report.StatsJson()};
}

CommandResult RunExtract(const PipelineConfig &cfg) {
  const Corpus corpus = OpenCorpus(cfg);
  const std::vector<EventSequence> seqs = NarrativeSequences(cfg, corpus);
  std::vector<std::vector<std::string>> canon;
  canon.reserve(seqs.size());
  for (const EventSequence &s : seqs) canon.push_back(s.Canonical());
  const EventCountTable table = BuildCountTable(canon);
  const std::vector<ScoredPair> pairs = RankPairs(table, cfg.min_cp);
  const std::vector<ScoredChain> chains = RankChains(table, canon, cfg.chains);

  std::string pairs_text;
  for (const ScoredPair &p : pairs) pairs_text += FormatPairTsv(p) + "\n";
  std::string chains_text;
  for (const ScoredChain &c : chains) chains_text += FormatChainTsv(c) + "\n";
  const fs::path dir = fs::path(cfg.out) / "knowledge";
  WriteText(dir / "pairs.tsv", pairs_text);
  WriteText(dir / "chains.tsv", chains_text);
  WriteText(dir / "counts.json", table.ToJson() + "\n");
  json report = {{"narratives", seqs.size()},
                 {"events", table.UnigramTotal()},
                 {"vocabulary", table.unigrams().size()},
                 {"pairs", pairs.size()},
                 {"chains", chains.size()},
                 {"min_cp", cfg.min_cp}};
  return {0, report.dump(2)};
}

CommandResult RunCloze(const PipelineConfig &cfg) {
  const fs::path dir = fs::path(cfg.out) / "cloze";
  json report;
  ClozeReport result;
  if (!cfg.questions.empty()) {
    const std::string counts_path =
        cfg.counts.empty() ? (fs::path(cfg.out) / "knowledge" / "counts.json").string()
                           : cfg.counts;
    const EventCountTable table = EventCountTable::Load(counts_path);
    const std::vector<ClozeQuestion> questions = LoadQuestions(cfg.questions);
    result = Evaluate(table, questions, cfg.cloze);
    report["questions"] = questions.size();
  } else {
    const Corpus corpus = OpenCorpus(cfg);
    const std::vector<EventSequence> seqs = NarrativeSequences(cfg, corpus);
    const size_t every =
        std::max<size_t>(2, static_cast<size_t>(std::llround(1.0 / cfg.cloze_holdout)));
    std::vector<std::vector<std::string>> train;
    std::vector<std::vector<std::string>> test;
    for (size_t i = 0; i < seqs.size(); ++i) {
      std::vector<std::string> events = seqs[i].Canonical();
      if (i % every == every - 1) {
        if (events.size() >= 2) test.push_back(std::move(events));
      } else {
        train.push_back(std::move(events));
      }
    }
    if (test.empty()) throw Error(ErrorCode::kRuntime, "no held-out sequences for cloze");
    const EventCountTable table = BuildCountTable(train);
    result = Evaluate(table, test, cfg.cloze);

    std::vector<std::string> vocab;
    for (const auto &[e, c] : table.unigrams()) vocab.push_back(e);
    Rng rng(DeriveSeed(cfg.cloze.rng_seed, 0));
    std::string lines;
    for (const ClozeQuestion &q : GenerateQuestions(test, vocab, rng)) {
      lines += QuestionToJson(q) + "\n";
    }
    WriteText(dir / "questions.jsonl", lines);
    report["train_sequences"] = train.size();
    report["questions"] = test.size();
  }
  WriteText(dir / "report.json", result.ToJson() + "\n");
  report["mean"] = result.mean;
  report["runs"] = result.runs;
  return {0, report.dump(2)};
}

CommandResult RunStats(const PipelineConfig &cfg) {
  const Corpus corpus = OpenCorpus(cfg);
  const RuleInventory rules = OpenRules(cfg);
  const CorpusProfiles prof =
      ProfileCorpus(corpus, rules, cfg.bootstrap.thresholds, cfg.workers);
  size_t sentences = 0, tokens = 0;
  for (size_t i = 0; i < corpus.paragraph_count(); ++i) {
    for (const SentenceAnnotation &s : corpus.paragraph(i).sentences) {
      ++sentences;
      tokens += s.tokens.size();
    }
  }
  auto count = [](const std::vector<bool> &v) {
    return static_cast<size_t>(std::count(v.begin(), v.end(), true));
  };
  json report = {{"documents", corpus.documents().size()},
                 {"paragraphs", corpus.paragraph_count()},
                 {"sentences", sentences},
                 {"tokens", tokens},
                 {"seeds", count(prof.seed)},
                 {"candidates", count(prof.candidate)},
                 {"negatives", count(prof.negative)}};
  const fs::path stats = fs::path(cfg.out) / "bootstrap" / "stats.json";
  if (fs::exists(stats)) report["bootstrap"] = json::parse(ReadText(stats.string()));
  return {0, report.dump(2)};
}

CommandResult RunCommand(std::string_view command, const PipelineConfig &cfg) {
  cfg.Validate();
  Log().info("running {}", command);
  if (command == "validate") return RunValidate(cfg);
  if (command == "seed") return RunSeed(cfg);
  if (command == "bootstrap") return RunBootstrapCommand(cfg);
  if (command == "extract") return RunExtract(cfg);
  if (command == "cloze") return RunCloze(cfg);
  if (command == "stats") return RunStats(cfg);
  throw InvalidArgument("unknown command '" + std::string(command) + "'");
}

}  // namespace narrev
