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


// Acceptance suite: one test per acceptance check, each printing a
// single "[ACCEPTANCE] ..." line with its verdict and wall time.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "narrev/bootstrap.h"
#include "narrev/cloze.h"
#include "narrev/error.h"
#include "narrev/events.h"
#include "narrev/features.h"
#include "narrev/maxent.h"
#include "narrev/rules.h"
#include "narrev/synthetic.h"
#include "test_util.h"

namespace narrev {
namespace {

namespace fs = std::filesystem;
namespace oracle = testing::oracle;
using testing::Sequences;

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<std::string> Vocab(const Sequences &seqs) {
  std::set<std::string> v;
  for (const auto &s : seqs) v.insert(s.begin(), s.end());
  return {v.begin(), v.end()};
}

std::optional<double> TryCp(const EventCountTable &t, const std::string &a,
                            const std::string &b, int d) {
  try {
    return CpD(t, a, b, d).value;
  } catch (const UndefinedScoreError &) {
    return std::nullopt;
  }
}

std::optional<double> TryPmi(const EventCountTable &t, const std::string &a,
                             const std::string &b, int d) {
  try {
    return Pmi(t, a, b, d);
  } catch (const UndefinedScoreError &) {
    return std::nullopt;
  }
}

TEST(Acceptance, C01_CpOracleEquivalence) {
  Stopwatch clock;
  Rng rng(101);
  size_t corpora = 0, checked_terms = 0, checked_pairs = 0, checked_chains = 0;
  double worst = 0.0;
  for (; corpora < 120; ++corpora) {
    const size_t vocab = 2 + rng.Uniform(19);
    Sequences seqs = testing::RandomSequences(rng, 100, vocab, 8);
    EventCountTable t = BuildCountTable(seqs);
    const auto names = Vocab(seqs);
    for (const auto &a : names) {
      for (const auto &b : names) {
        for (int d = 1; d <= kMaxDistance; ++d) {
          const auto got = TryCp(t, a, b, d);
          const auto want = oracle::Cp(seqs, a, b, d);
          ASSERT_EQ(got.has_value(), want.has_value()) << a << " " << b << " d=" << d;
          if (got) {
            worst = std::max(worst, std::abs(*got - *want));
            ++checked_terms;
          }
        }
        if (t.Cooc(a, b, 1) > 0) {
          worst = std::max(worst, std::abs(WeightedCp(t, a, b).cp - oracle::WeightedCp(seqs, a, b)));
          ++checked_pairs;
        }
      }
    }
    std::set<std::vector<std::string>> segments;
    for (const auto &s : seqs) {
      for (size_t n = 3; n <= 5; ++n) {
        for (size_t i = 0; i + n <= s.size(); ++i) segments.emplace(s.begin() + i, s.begin() + i + n);
      }
    }
    for (const auto &chain : segments) {
      worst = std::max(worst, std::abs(ChainScore(t, chain) - oracle::Chain(seqs, chain)));
      ++checked_chains;
    }
  }
  std::cout << "  corpora=" << corpora << " cp_d terms=" << checked_terms
            << " pairs=" << checked_pairs << " chains=" << checked_chains
            << " max |diff|=" << worst << "\n";
  EXPECT_GE(corpora, 100u);
  EXPECT_LE(worst, 1e-9);
  EXPECT_LT(clock.Seconds(), 30.0);
}

TEST(Acceptance, C02_AlgebraicIdentities) {
  Stopwatch clock;
  Rng rng(202);
  size_t sampled = 0, antisym = 0;
  double worst = 0.0;
  while (sampled < 20000) {
    Sequences seqs = testing::RandomSequences(rng, 100, 2 + rng.Uniform(19), 8);
    EventCountTable t = BuildCountTable(seqs);
    const auto names = Vocab(seqs);
    for (int k = 0; k < 200; ++k, ++sampled) {
      const std::string &a = names[rng.Uniform(names.size())];
      const std::string &b = names[rng.Uniform(names.size())];
      const int d = 1 + static_cast<int>(rng.Uniform(kMaxDistance));
      const auto ab = TryPmi(t, a, b, d);
      const auto ba = TryPmi(t, b, a, d);
      ASSERT_EQ(ab.has_value(), ba.has_value());
      if (ab) worst = std::max(worst, std::abs(*ab - *ba));
      if (t.Cooc(a, b, d) > 0 && t.Cooc(b, a, d) > 0) {
        worst = std::max(worst, std::abs(CpD(t, a, b, d).value + CpD(t, b, a, d).value - 2 * *ab));
        ++antisym;
      }
    }
  }
  std::cout << "  sampled pairs=" << sampled << " antisymmetry checks=" << antisym
            << " max |diff|=" << worst << "\n";
  EXPECT_GE(sampled, 10000u);
  EXPECT_LE(worst, 1e-9);
  EXPECT_LT(clock.Seconds(), 10.0);
}

TEST(Acceptance, C03_WorkedMicroCorpus) {
  EventCountTable t = BuildCountTable(Sequences{{"a", "b"}, {"a", "b"}, {"b", "a"}});
  const double cp = CpD(t, "a", "b", 1).value;
  std::cout << "  cp_1(a,b)=" << cp << " ln 8=" << std::log(8.0) << "\n";
  EXPECT_NEAR(cp, std::log(8.0), 1e-12);
}

// Bracketed subtree exercising one symbol of a rule right-hand side.
std::string Expand(const std::string &symbol) {
  static const std::map<std::string, std::string> kPhrases = {
      {"NP", "(NP (PRP He))"},
      {"VP", "(VP (VBD left))"},
      {"S", "(S (NP (PRP She)) (VP (VBD arrived)))"},
      {"SBAR", "(SBAR (IN when) (S (NP (PRP it)) (VP (VBD rained))))"},
      {"PP", "(PP (IN after) (NP (NN lunch)))"},
      {"ADVP", "(ADVP (RB then))"},
      {"PRN", "(PRN (-LRB- -LRB-) (NP (NN aside)) (-RRB- -RRB-))"},
      {"ADJP", "(ADJP (JJ happy))"},
      {"WHNP", "(WHNP (WP who))"},
      {"SQ", "(SQ (VBD did))"},
      {"FRAG", "(FRAG (NN nothing))"},
  };
  static const std::map<std::string, std::string> kWords = {
      {"CC", "and"},   {"NN", "dog"},  {"NNP", "Anna"}, {"NNS", "dogs"},
      {"NNPS", "Smiths"}, {"PRP", "he"}, {"DT", "the"},  {"JJ", "quiet"},
      {"VBD", "ran"},  {"IN", "of"},   {"RB", "soon"},  {"VBZ", "runs"},
  };
  if (auto it = kPhrases.find(symbol); it != kPhrases.end()) return it->second;
  return "(" + symbol + " " + kWords.at(symbol) + ")";
}

std::string ClauseFor(const ProductionRule &rule, bool sentence_rule) {
  std::string rhs;
  for (const auto &sym : rule.rhs) rhs += " " + Expand(sym);
  if (sentence_rule) return "(S" + rhs + " (. .))";
  return "(S (NP" + rhs + ") (VP (VBD left)) (. .))";
}

TEST(Acceptance, C04_GrammarConformance) {
  Stopwatch clock;
  const RuleInventory &inv = RuleInventory::Default();
  ASSERT_EQ(inv.sentence_rules().size() + inv.np_rules().size(), 26u);
  size_t matched = 0;
  for (const auto &r : inv.sentence_rules()) {
    const bool ok = IsActantial(MakeSentence(ClauseFor(r, true)), inv);
    EXPECT_TRUE(ok) << r.Key();
    matched += ok;
  }
  for (const auto &r : inv.np_rules()) {
    const bool ok = IsActantial(MakeSentence(ClauseFor(r, false)), inv);
    EXPECT_TRUE(ok) << r.Key();
    matched += ok;
  }

  const std::vector<std::string> alphabet = {"NP", "VP",  "S",    "SBAR", "PP",  "ADVP",
                                             "CC", "PRN", "ADJP", "NN",   "NNP", "NNS",
                                             "NNPS", "PRP", "DT",  "JJ",  "VBD", "IN",
                                             "RB", "WHNP", "SQ", "FRAG", "VBZ"};
  std::vector<std::pair<ProductionRule, bool>> rules;
  for (const auto &r : inv.sentence_rules()) rules.push_back({r, true});
  for (const auto &r : inv.np_rules()) rules.push_back({r, false});
  Rng rng(404);
  size_t rejected = 0, fuzzed = 0;
  std::set<std::string> distinct;
  while (fuzzed < 1000) {
    const auto &[base, sentence_rule] = rules[rng.Uniform(rules.size())];
    ProductionRule r = base;
    const std::string sym = alphabet[rng.Uniform(alphabet.size())];
    switch (rng.Uniform(4)) {
      case 0:
        r.rhs[rng.Uniform(r.rhs.size())] = sym;
        break;
      case 1:
        r.rhs.insert(r.rhs.begin() + rng.Uniform(r.rhs.size() + 1), sym);
        break;
      case 2:
        if (r.rhs.size() < 2) continue;
        r.rhs.erase(r.rhs.begin() + rng.Uniform(r.rhs.size()));
        break;
      default: {
        if (r.rhs.size() < 2) continue;
        const size_t i = rng.Uniform(r.rhs.size() - 1);
        std::swap(r.rhs[i], r.rhs[i + 1]);
        break;
      }
    }
    const auto &pool = sentence_rule ? inv.sentence_rules() : inv.np_rules();
    if (pool.count(r)) continue;  // the perturbation landed on another valid rule
    ++fuzzed;
    distinct.insert(r.Key());
    const bool accepted = IsActantial(MakeSentence(ClauseFor(r, sentence_rule)), inv);
    EXPECT_FALSE(accepted) << r.Key();
    rejected += !accepted;
  }
  std::cout << "  inventory rules matched=" << matched << "/26 near-misses rejected="
            << rejected << "/" << fuzzed << " (" << distinct.size() << " distinct)\n";
  EXPECT_EQ(matched, 26u);
  EXPECT_EQ(rejected, fuzzed);
  EXPECT_LT(clock.Seconds(), 5.0);
}

TEST(Acceptance, C05_AnnotatedNarratives) {
  Corpus corpus(LoadCorpus(testing::DataPath("two_narratives.jsonl")));
  const RuleInventory &inv = RuleInventory::Default();
  for (const char *id : {"news_kennedy#0", "novel_beth#0"}) {
    const auto idx = corpus.Find(id);
    ASSERT_TRUE(idx.has_value()) << id;
    const ParagraphProfile prof = ProfileParagraph(corpus.paragraph(*idx), inv);
    std::cout << "  " << id << ": sentences=" << prof.n_sentences
              << " actantial=" << prof.actantial_fraction
              << " non_declarative=" << prof.non_declarative_fraction
              << " chain=" << prof.longest_chain_norm << "\n";
    EXPECT_TRUE(IsSeedNarrative(prof)) << id;
  }
  const auto events = ExtractEventSequence(corpus.paragraph(*corpus.Find("novel_beth#0")));
  const std::vector<std::string> expected = {"pay",   "jump_out", "head",   "reach_into",
                                             "enter", "undress",  "shower", "change",
                                             "grab",  "leave"};
  const size_t matches = testing::GranularityMatches(events.Canonical(), expected);
  std::cout << "  Beth events:";
  for (const auto &e : events.Canonical()) std::cout << " " << e;
  std::cout << "\n  matched " << matches << "/10\n";
  EXPECT_GE(matches, 8u);
}

FeatureVector Dense(const std::vector<double> &v) {
  FeatureVector x;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) x.entries.emplace_back(static_cast<int>(i), v[i]);
  }
  return x;
}

FeatureSpace Space(size_t dim) {
  FeatureSpace s;
  for (size_t i = 0; i < dim; ++i) s.Intern("f" + std::to_string(i));
  s.Freeze();
  return s;
}

TEST(Acceptance, C06_MaxEnt) {
  Rng rng(606);
  // Separable: label by the sign of a fixed hyperplane, with a margin.
  std::vector<FeatureVector> pos, neg;
  const std::vector<double> w = {1.5, -2.0, 0.5, 1.0};
  while (pos.size() + neg.size() < 200) {
    std::vector<double> v(4);
    for (double &e : v) e = rng.UniformDouble() * 4 - 2;
    double s = 0.3;
    for (size_t i = 0; i < 4; ++i) s += w[i] * v[i];
    if (std::abs(s) < 0.5) continue;
    (s > 0 ? pos : neg).push_back(Dense(v));
  }
  TrainConfig cfg;
  cfg.l2_c = 0.01;
  MaxEntModel m = Train(pos, neg, Space(4), cfg);
  size_t correct = 0;
  for (const auto &x : pos) correct += m.PredictProb(x) > 0.5;
  for (const auto &x : neg) correct += m.PredictProb(x) < 0.5;
  const double acc = static_cast<double>(correct) / (pos.size() + neg.size());

  double worst_rel = 0.0;
  for (int problem = 0; problem < 20; ++problem) {
    const size_t dim = 2 + rng.Uniform(8);
    std::vector<FeatureVector> xs(10 + rng.Uniform(40));
    std::vector<LabeledExample> data;
    for (auto &x : xs) {
      std::vector<double> v(dim);
      for (double &e : v) e = rng.Bernoulli(0.3) ? 0.0 : rng.UniformDouble() * 4 - 2;
      x = Dense(v);
      data.push_back({&x, rng.Bernoulli(0.5)});
    }
    TrainConfig c;
    c.l2_c = 0.1 + rng.UniformDouble();
    std::vector<double> params(dim + 1);
    for (double &p : params) p = rng.UniformDouble() * 2 - 1;
    const LossAndGradient lg = ComputeLossAndGradient(params, data, dim, c);
    for (size_t i = 0; i <= dim; ++i) {
      const double h = 1e-5;
      auto plus = params, minus = params;
      plus[i] += h;
      minus[i] -= h;
      const double fd = (ComputeLossAndGradient(plus, data, dim, c).loss -
                         ComputeLossAndGradient(minus, data, dim, c).loss) /
                        (2 * h);
      worst_rel = std::max(worst_rel, std::abs(fd - lg.gradient[i]) / std::max(1.0, std::abs(fd)));
    }
  }

  std::vector<FeatureVector> same = {Dense({1, 2, 0}), Dense({0, 3, 1}), Dense({2, 0, 2})};
  MaxEntModel balanced = Train(same, same, Space(3));
  double worst_half = 0.0;
  for (const auto &x : same) worst_half = std::max(worst_half, std::abs(balanced.PredictProb(x) - 0.5));

  std::cout << "  separable train accuracy=" << acc << " gradient max rel err=" << worst_rel
            << " balanced max |p-0.5|=" << worst_half << "\n";
  EXPECT_EQ(acc, 1.0);
  EXPECT_LE(worst_rel, 1e-4);
  EXPECT_LE(worst_half, 1e-6);
}

std::map<std::string, std::string> ReadTree(const fs::path &root) {
  std::map<std::string, std::string> files;
  for (const auto &entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), root).string()] = testing::ReadFile(entry.path().string());
    }
  }
  return files;
}

TEST(Acceptance, C07_BootstrapOnPlantedCorpus) {
  Stopwatch clock;
  const SyntheticCorpus synth = GenerateSyntheticCorpus();
  const Corpus corpus(synth.documents);
  const LexiconDictionary lexicon = LexiconDictionary::Load(testing::DataPath("lexicon_demo.tsv"));
  ASSERT_EQ(corpus.paragraph_count(), 1000u);
  BootstrapInputs in;
  in.corpus = &corpus;
  in.rules = &RuleInventory::Default();
  in.lexicon = &lexicon;
  BootstrapConfig cfg;
  cfg.min_new_narratives = 20;
  cfg.rng_seed = 7;

  const BootstrapReport first = RunBootstrap(in, cfg);
  const BootstrapReport second = RunBootstrap(in, cfg);
  testing::TempDir dir;
  WriteBootstrapArtifacts(first, dir.File("a"));
  WriteBootstrapArtifacts(second, dir.File("b"));
  const auto files_a = ReadTree(dir.File("a"));
  const auto files_b = ReadTree(dir.File("b"));

  size_t correct = 0;
  for (const auto &id : first.learned_ids) correct += IsNarrativeKind(synth.truth.at(id));
  const double precision = static_cast<double>(correct) / first.learned_ids.size();
  bool schedule = true;
  for (size_t k = 0; k < first.iterations.size(); ++k) {
    schedule = schedule && first.iterations[k].iteration == k &&
               std::abs(first.iterations[k].threshold - (0.5 + 0.05 * k)) < 1e-12;
  }
  std::cout << "  seeds=" << first.seed_ids.size() << " iterations=" << first.iterations.size()
            << " learned=" << first.learned_ids.size() << " precision=" << precision
            << " artifact files=" << files_a.size() << "\n";
  for (const auto &it : first.iterations) {
    std::cout << "    iter " << it.iteration << " threshold=" << it.threshold
              << " accepted=" << it.accepted << "\n";
  }
  EXPECT_LE(first.iterations.size(), cfg.max_iterations);
  EXPECT_GE(precision, 0.9);
  EXPECT_TRUE(schedule);
  EXPECT_FALSE(files_a.empty());
  EXPECT_TRUE(files_a == files_b);
  EXPECT_LT(clock.Seconds(), 120.0);
}

TEST(Acceptance, C08_Perplexity) {
  PerplexityOptions raw;
  raw.smoothing = false;
  BigramLanguageModel det;
  for (int i = 0; i < 5; ++i) det.AddSequence({"wake", "dress", "eat", "leave", "work"});
  const double pp_det = Perplexity({"wake", "dress", "eat", "leave", "work"}, det, raw);

  BigramLanguageModel hand;
  hand.AddSequence({"a", "b"});
  hand.AddSequence({"a", "c"});
  const double pp_hand = Perplexity({"a", "b"}, hand, raw);

  Rng rng(808);
  size_t below_one = 0;
  double min_pp = INFINITY;
  BigramLanguageModel lm;
  for (const auto &s : testing::RandomSequences(rng, 200, 15, 8)) lm.AddSequence(s);
  for (int q = 0; q < 10000; ++q) {
    std::vector<std::string> query(2 + rng.Uniform(7));
    for (auto &e : query) e = "e" + std::to_string(rng.Uniform(20));
    const double pp = Perplexity(query, lm);
    min_pp = std::min(min_pp, pp);
    below_one += pp < 1.0;
  }
  std::cout << "  deterministic PP=" << pp_det << " hand PP=" << pp_hand
            << " (sqrt 2=" << std::sqrt(2.0) << ") min PP over 10^4 queries=" << min_pp << "\n";
  EXPECT_EQ(pp_det, 1.0);
  EXPECT_NEAR(pp_hand, std::sqrt(2.0), 1e-12);
  EXPECT_EQ(below_one, 0u);
}

TEST(Acceptance, C09_ClozeEvaluator) {
  Stopwatch clock;
  // Deterministic scripts: 40 disjoint scripts of 6 events.
  Sequences train, test;
  for (int k = 0; k < 40; ++k) {
    std::vector<std::string> s;
    for (int j = 0; j < 6; ++j) s.push_back("s" + std::to_string(k) + "_" + std::to_string(j));
    for (int c = 0; c < 3; ++c) train.push_back(s);
    test.push_back(s);
  }
  ClozeConfig cfg;
  const ClozeReport fixture = Evaluate(BuildCountTable(train), test, cfg);

  Rng rng(909);
  Sequences random;
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> s(2 + rng.Uniform(4));
    for (auto &e : s) e = "v" + std::to_string(rng.Uniform(100));
    random.push_back(s);
  }
  std::vector<std::string> vocab;
  for (int i = 0; i < 100; ++i) vocab.push_back("v" + std::to_string(i));
  const ClozeScorer constant = [](const std::vector<std::string> &, const std::string &) {
    return 0.0;
  };
  const ClozeReport baseline = Evaluate(random, vocab, constant, cfg);
  std::cout << "  fixture accuracy=" << fixture.mean << " constant-scorer accuracy="
            << baseline.mean << " over " << baseline.runs.size() << " runs x " << random.size()
            << " questions\n";
  EXPECT_GE(fixture.mean, 0.9);
  EXPECT_EQ(baseline.runs.size(), 10u);
  EXPECT_NEAR(baseline.mean, 0.2, 0.05);
  EXPECT_LT(clock.Seconds(), 30.0);
}

int RunCli(const std::string &args, std::string *out = nullptr) {
  const std::string cmd = std::string(NARREV_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  std::array<char, 4096> buf;
  size_t n;
  std::string text;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) text.append(buf.data(), n);
  const int status = pclose(pipe);
  if (out) *out = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Acceptance, C10_EndToEndSmoke) {
  Stopwatch clock;
  testing::TempDir dir;
  const double min_cp = 2.0;
  const std::string common = " --corpus " + testing::DataPath("synthetic_corpus.jsonl") +
                             " --lexicon " + testing::DataPath("lexicon_demo.tsv") + " --out " +
                             dir.File("out") + " --min-new 20 --min-cp 2.0 --seed 7";
  std::map<std::string, int> codes;
  for (const char *cmd : {"validate", "seed", "bootstrap", "extract", "cloze"}) {
    codes[cmd] = RunCli(std::string(cmd) + common);
    EXPECT_EQ(codes[cmd], 0) << cmd;
  }
  const std::string pairs = testing::ReadFile(dir.File("out") + "/knowledge/pairs.tsv");
  const std::string chains = testing::ReadFile(dir.File("out") + "/knowledge/chains.tsv");
  std::istringstream lines(pairs);
  std::string line;
  size_t n_pairs = 0, below = 0;
  while (std::getline(lines, line)) {
    std::istringstream cols(line);
    std::string a, b, cp;
    std::getline(cols, a, '\t');
    std::getline(cols, b, '\t');
    std::getline(cols, cp, '\t');
    ++n_pairs;
    below += std::stod(cp) < min_cp;
  }
  const size_t n_chains = std::count(chains.begin(), chains.end(), '\n');
  std::cout << "  exit codes:";
  for (const auto &[cmd, code] : codes) std::cout << " " << cmd << "=" << code;
  std::cout << "\n  pairs=" << n_pairs << " chains=" << n_chains << " pairs below cutoff="
            << below << " wall=" << clock.Seconds() << "s\n";
  EXPECT_GT(n_pairs, 0u);
  EXPECT_GT(n_chains, 0u);
  EXPECT_EQ(below, 0u);
  EXPECT_LT(clock.Seconds(), 300.0);
}

class AcceptancePrinter : public ::testing::EmptyTestEventListener {
  void OnTestEnd(const ::testing::TestInfo &info) override {
    const ::testing::TestResult *r = info.result();
    std::cout << "[ACCEPTANCE] " << info.name() << ": " << (r->Passed() ? "PASS" : "FAIL")
              << " (" << r->elapsed_time() << " ms)" << std::endl;
  }
};

}  // namespace
}  // namespace narrev

int main(int argc, char **argv) {
  ::testing::InitGoogleTest(&argc, argv);
  ::testing::UnitTest::GetInstance()->listeners().Append(new narrev::AcceptancePrinter);
  return RUN_ALL_TESTS();
}
