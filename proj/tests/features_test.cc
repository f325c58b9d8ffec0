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

#include <cmath>
#include <map>
#include <thread>

#include <gtest/gtest.h>

#include "narrev/error.h"
#include "narrev/random.h"
#include "test_util.h"

namespace narrev {
namespace {

using testing::MakeChain;
using testing::MakeParagraph;

BigramLanguageModel Lm(const std::vector<std::vector<std::string>> &seqs) {
  BigramLanguageModel lm;
  for (const auto &s : seqs) lm.AddSequence(s);
  return lm;
}

PerplexityOptions NoSmoothing() {
  PerplexityOptions o;
  o.smoothing = false;
  return o;
}

TEST(FeatureSpaceTest, InternFreezeAndJson) {
  FeatureSpace space;
  EXPECT_EQ(space.Intern("a"), 0);
  EXPECT_EQ(space.Intern("b"), 1);
  EXPECT_EQ(space.Intern("a"), 0);
  space.Freeze();
  EXPECT_EQ(space.Intern("c"), std::nullopt);
  EXPECT_EQ(space.size(), 2u);
  FeatureSpace back = FeatureSpace::FromJson(space.ToJson());
  EXPECT_EQ(back, space);
  EXPECT_TRUE(back.frozen());
  EXPECT_THROW(FeatureSpace::FromJson("{\"a\": 0, \"b\": 5}"), Error);
  EXPECT_THROW(FeatureSpace::FromJson("[1]"), Error);
}

TEST(FeatureVectorTest, ToVectorSortsAndDrops) {
  FeatureSpace space;
  space.Intern("z");
  FeatureVector v = ToVector(NamedFeatures{{"a", 2.0}, {"z", 1.0}}, space);
  EXPECT_EQ(v.entries, (std::vector<std::pair<int, double>>{{0, 1.0}, {1, 2.0}}));
  space.Freeze();
  const FeatureSpace &frozen = space;
  FeatureVector w = ToVector(NamedFeatures{{"a", 3.0}, {"new", 1.0}}, frozen);
  EXPECT_EQ(w.entries, (std::vector<std::pair<int, double>>{{1, 3.0}}));
  EXPECT_NO_THROW(v.Validate());
}

TEST(FeatureVectorTest, Validate) {
  FeatureVector v;
  v.entries = {{1, 1.0}, {1, 2.0}};
  EXPECT_THROW(v.Validate(), Error);
  v.entries = {{0, NAN}};
  EXPECT_THROW(v.Validate(), Error);
  v.entries = {{0, INFINITY}};
  EXPECT_THROW(v.Validate(), Error);
}

TEST(PerplexityTest, DeterministicCorpusIsOne) {
  BigramLanguageModel lm = Lm({{"a", "b", "c", "d"}, {"a", "b", "c", "d"}});
  EXPECT_EQ(Perplexity({"a", "b", "c", "d"}, lm, NoSmoothing()), 1.0);
}

TEST(PerplexityTest, HandCase) {
  BigramLanguageModel lm = Lm({{"a", "b"}, {"a", "c"}});
  EXPECT_NEAR(Perplexity({"a", "b"}, lm, NoSmoothing()), std::sqrt(2.0), 1e-12);
}

TEST(PerplexityTest, SmoothedHandCase) {
  // V = {a, b, c}; P(b | a) = (1 + 1) / (2 + 3).
  BigramLanguageModel lm = Lm({{"a", "b"}, {"a", "c"}});
  EXPECT_NEAR(Perplexity({"a", "b"}, lm), std::sqrt(2.5), 1e-12);
  // An unseen event enlarges V: P(x | a) = 1 / (2 + 4), P(a | x) = 1 / (0 + 4).
  EXPECT_NEAR(Perplexity({"a", "x", "a"}, lm), std::cbrt(6.0 * 4.0), 1e-12);
}

TEST(PerplexityTest, Errors) {
  BigramLanguageModel lm = Lm({{"a", "b"}});
  EXPECT_THROW(Perplexity({"a"}, lm), Error);
  EXPECT_THROW(Perplexity({}, lm), Error);
  EXPECT_THROW(Perplexity({"b", "a"}, lm, NoSmoothing()), UndefinedScoreError);
}

TEST(PerplexityTest, AtLeastOneAndRenamingInvariant) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto seqs = testing::RandomSequences(rng, 20, 6, 6);
    BigramLanguageModel lm = Lm(seqs);
    std::map<std::string, std::string> rename;
    for (int i = 0; i < 8; ++i) rename["e" + std::to_string(i)] = "r" + std::to_string(7 - i);
    auto renamed = seqs;
    for (auto &s : renamed) {
      for (auto &e : s) e = rename[e];
    }
    BigramLanguageModel lm2 = Lm(renamed);
    std::vector<std::string> q(2 + rng.Uniform(5));
    for (auto &e : q) e = "e" + std::to_string(rng.Uniform(8));
    std::vector<std::string> q2 = q;
    for (auto &e : q2) e = rename[e];
    const double pp = Perplexity(q, lm);
    EXPECT_GE(pp, 1.0);
    EXPECT_NEAR(pp, Perplexity(q2, lm2), 1e-12);
  }
}

TEST(LexiconTest, ParseAndMatch) {
  LexiconDictionary dict = LexiconDictionary::Parse(
      "# comment\nmotion\twalk*, ran\ntime\tthen,later\n\n");
  EXPECT_EQ(dict.categories().size(), 2u);
  EXPECT_EQ(dict.Match("Walked"), std::vector<std::string>{"motion"});
  EXPECT_EQ(dict.Match("ran"), std::vector<std::string>{"motion"});
  EXPECT_TRUE(dict.Match("rang").empty());
  EXPECT_THROW(LexiconDictionary::Parse("motion walk"), Error);
  EXPECT_THROW(LexiconDictionary::Parse("# nothing\n"), Error);
  EXPECT_THROW(LexiconDictionary::Load("/nonexistent/lexicon.tsv"), Error);
  EXPECT_NO_THROW(LexiconDictionary::Load(testing::DataPath("lexicon_demo.tsv")));
}

TEST(FamilyTest, RulesPosLexicon) {
  ParagraphRecord p = MakeParagraph(
      "d", 0,
      {"(S (NP (PRP He)) (VP (VBD walked) (ADVP (RB home))) (. .))",
       "(S (ADVP (RB Then)) (NP (PRP he)) (VP (VBD slept)) (. .))"});
  NamedFeatures rules = RuleFeatures(p);
  EXPECT_EQ(rules.at("rule:NP→PRP"), 2.0);
  EXPECT_EQ(rules.at("rule:VP→VBD ADVP"), 1.0);
  EXPECT_EQ(rules.count("rule:PRP→He"), 0u);
  NamedFeatures pos = PosFeatures(p);
  EXPECT_EQ(pos.at("pos:PRP"), 2.0);
  EXPECT_EQ(pos.at("pos:VBD"), 2.0);
  EXPECT_EQ(pos.at("pos:."), 2.0);
  LexiconDictionary dict =
      LexiconDictionary::Parse("motion\twalk*\ntime\tthen\nsocial\tfriend*\n");
  NamedFeatures lex = LexiconFeatures(p, dict);
  EXPECT_EQ(lex.at("liwc:motion"), 1.0);
  EXPECT_EQ(lex.at("liwc:time"), 1.0);
  EXPECT_EQ(lex.at("liwc:social"), 0.0);
}

ParagraphRecord ChainParagraph(int index, int64_t chain_id, int mentions) {
  std::vector<std::string> ptbs;
  std::vector<std::pair<int, int>> at;
  for (int i = 0; i < 4; ++i) {
    ptbs.push_back("(S (NP (PRP He)) (VP (VBD waited)) (. .))");
    if (i < mentions) at.push_back({i, 0});
  }
  return MakeParagraph("d", index, ptbs, {MakeChain(chain_id, at)});
}

TEST(ProtagonistTest, OwnAndWindow) {
  ParagraphRecord prev = ChainParagraph(0, 1, 2);
  ParagraphRecord target = ChainParagraph(1, 1, 3);
  target.chains.push_back(MakeChain(2, {{3, 0}}));
  target.chains.push_back(MakeChain(3, {{2, 1}}, NerLabel::kOther));
  ParagraphRecord next = ChainParagraph(2, 4, 4);
  ParagraphWindow w{&prev, &target, &next};
  auto f = ProtagonistFeatures(w);
  EXPECT_DOUBLE_EQ(f[0], 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(f[1], 1.0 / 4.0);
  EXPECT_DOUBLE_EQ(f[2], 0.0);
  // Chain 1 merges across prev and target (5 mentions), chain 4 has 4.
  EXPECT_DOUBLE_EQ(f[3], 5.0 / 12.0);
  EXPECT_DOUBLE_EQ(f[4], 4.0 / 12.0);
  EXPECT_DOUBLE_EQ(f[5], 1.0 / 12.0);

  ParagraphWindow alone{nullptr, &target, nullptr};
  auto g = ProtagonistFeatures(alone);
  EXPECT_DOUBLE_EQ(g[3], 3.0 / 4.0);
}

TEST(ProtagonistTest, HeadStringMatching) {
  ParagraphRecord a = MakeParagraph(
      "d", 0, {"(S (NP (NNP Anna)) (VP (VBD waited)) (. .))"}, {MakeChain(1, {{0, 0}})});
  ParagraphRecord b = MakeParagraph(
      "d", 1, {"(S (NP (NNP Anna)) (VP (VBD left)) (. .))"}, {MakeChain(9, {{0, 0}})});
  ParagraphWindow w{&a, &b, nullptr};
  EXPECT_DOUBLE_EQ(ProtagonistFeatures(w, ChainMatch::kById)[3], 0.5);
  EXPECT_DOUBLE_EQ(ProtagonistFeatures(w, ChainMatch::kByHeadString)[3], 1.0);
}

TEST(AssembleTest, PerplexityFeatureAndDeterminism) {
  ParagraphRecord p = MakeParagraph(
      "d", 0,
      {"(S (NP (PRP He)) (VP (VBD opened) (NP (DT the) (NN door))) (. .))",
       "(S (NP (PRP He)) (VP (VBD left)) (. .))"},
      {MakeChain(1, {{0, 0}, {1, 0}})});
  BigramLanguageModel lm = Lm({{"open", "leave"}});
  FeatureContext ctx;
  ctx.lm = &lm;
  NamedFeatures f = NamedParagraphFeatures({nullptr, &p, nullptr}, ctx);
  ASSERT_TRUE(f.count("pp"));
  EXPECT_GE(f.at("pp"), 1.0);
  EXPECT_EQ(f.at("chain:1"), 1.0);

  ParagraphRecord quiet = MakeParagraph("d", 1, {"(NP (DT A) (JJ quiet) (NN night))"});
  EXPECT_EQ(NamedParagraphFeatures({nullptr, &quiet, nullptr}, ctx).count("pp"), 0u);

  FeatureSpace s1, s2;
  EXPECT_EQ(Assemble({nullptr, &p, nullptr}, ctx, s1),
            Assemble({nullptr, &p, nullptr}, ctx, s2));
  EXPECT_EQ(s1, s2);
}

TEST(AssembleTest, ConcurrentReadOnlyMapping) {
  FeatureSpace space;
  NamedFeatures named;
  for (int i = 0; i < 200; ++i) named["f" + std::to_string(i)] = i;
  const FeatureVector expected = ToVector(named, space);
  space.Freeze();
  const FeatureSpace &frozen = space;
  std::vector<std::thread> threads;
  std::vector<bool> ok(4, false);
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      bool all = true;
      for (int i = 0; i < 100; ++i) all = all && ToVector(named, frozen) == expected;
      ok[t] = all;
    });
  }
  for (auto &th : threads) th.join();
  for (bool b : ok) EXPECT_TRUE(b);
}

}  // namespace
}  // namespace narrev
