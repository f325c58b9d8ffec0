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


#include "narrev/synthetic.h"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_map>

#include "narrev/error.h"
#include "narrev/random.h"
#include "narrev/tree.h"

namespace narrev {

namespace {

struct Verb {
  const char *past;
  const char *present;  // third person singular
  const char *lemma;
  const char *particle;  // "" when none
  const char *complement;  // PTB, may be empty
};

// Everyday scripts with a fixed event order.
const std::vector<std::vector<Verb>> &Scripts() {
  static const std::vector<std::vector<Verb>> scripts = {
      {{"woke", "wakes", "wake", "up", ""},
       {"showered", "showers", "shower", "", ""},
       {"dressed", "dresses", "dress", "", "(ADVP (RB quickly))"},
       {"ate", "eats", "eat", "", "(NP (NN breakfast))"},
       {"caught", "catches", "catch", "", "(NP (DT the) (NN bus))"},
       {"arrived", "arrives", "arrive", "", "(PP (IN at) (NP (DT the) (NN office)))"}},
      {{"drove", "drives", "drive", "", "(PP (TO to) (NP (DT the) (NN store)))"},
       {"parked", "parks", "park", "", "(NP (DT the) (NN car))"},
       {"got", "gets", "get", "out", "(PP (IN of) (NP (DT the) (NN car)))"},
       {"walked", "walks", "walk", "", "(ADVP (RB inside))"},
       {"bought", "buys", "buy", "", "(NP (NN bread))"},
       {"paid", "pays", "pay", "", "(NP (DT the) (NN cashier))"},
       {"left", "leaves", "leave", "", "(NP (DT the) (NN store))"}},
      {{"packed", "packs", "pack", "", "(NP (DT a) (NN bag))"},
       {"locked", "locks", "lock", "", "(NP (DT the) (NN door))"},
       {"boarded", "boards", "board", "", "(NP (DT the) (NN train))"},
       {"read", "reads", "read", "", "(NP (DT a) (NN book))"},
       {"fell", "falls", "fall", "", "(ADJP (JJ asleep))"},
       {"woke", "wakes", "wake", "up", "(PP (IN in) (NP (NNP Boston)))"}},
      {{"heard", "hears", "hear", "", "(NP (DT a) (NN noise))"},
       {"grabbed", "grabs", "grab", "", "(NP (DT a) (NN flashlight))"},
       {"opened", "opens", "open", "", "(NP (DT the) (NN door))"},
       {"searched", "searches", "search", "", "(NP (DT the) (NN yard))"},
       {"found", "finds", "find", "", "(NP (DT the) (NN cat))"},
       {"laughed", "laughs", "laugh", "", ""}},
      {{"cooked", "cooks", "cook", "", "(NP (NN dinner))"},
       {"set", "sets", "set", "", "(NP (DT the) (NN table))"},
       {"served", "serves", "serve", "", "(NP (DT the) (NN food))"},
       {"washed", "washes", "wash", "", "(NP (DT the) (NNS dishes))"},
       {"sat", "sits", "sit", "down", ""},
       {"watched", "watches", "watch", "", "(NP (DT a) (NN film))"}},
      {{"dug", "digs", "dig", "", "(NP (DT a) (NN hole))"},
       {"planted", "plants", "plant", "", "(NP (DT the) (NN tree))"},
       {"watered", "waters", "water", "", "(NP (DT the) (NN soil))"},
       {"picked", "picks", "pick", "up", "(NP (DT the) (NNS tools))"},
       {"went", "goes", "go", "", "(ADVP (RB home))"}},
  };
  return scripts;
}

// Past-tense career verbs for short biographies.
const std::vector<Verb> &CareerVerbs() {
  static const std::vector<Verb> verbs = {
      {"founded", "founds", "found", "", "(NP (DT the) (NN institute))"},
      {"published", "publishes", "publish", "", "(NP (DT a) (NN report))"},
      {"studied", "studies", "study", "", "(NP (NN chemistry))"},
      {"joined", "joins", "join", "", "(NP (DT the) (NN faculty))"},
      {"designed", "designs", "design", "", "(NP (DT a) (NN survey))"},
      {"led", "leads", "lead", "", "(NP (DT the) (NN project))"},
  };
  return verbs;
}

// Present-tense descriptive verbs.
const std::vector<Verb> &StateVerbs() {
  static const std::vector<Verb> verbs = {
      {"described", "describes", "describe", "", "(NP (DT the) (NN method))"},
      {"required", "requires", "require", "", "(NP (JJ careful) (NN planning))"},
      {"included", "includes", "include", "", "(NP (DT a) (NN survey))"},
      {"used", "uses", "use", "", "(NP (JJ public) (NNS records))"},
      {"explained", "explains", "explain", "", "(NP (DT the) (NNS results))"},
      {"contained", "contains", "contain", "", "(NP (NN water))"},
      {"supported", "supports", "support", "", "(NP (JJ local) (NNS farms))"},
      {"connected", "connects", "connect", "", "(NP (DT the) (NNS towns))"},
      {"covered", "covers", "cover", "", "(NP (DT the) (NN valley))"},
      {"produced", "produces", "produce", "", "(NP (NN energy))"},
  };
  return verbs;
}

const std::vector<std::string> &Topics() {
  static const std::vector<std::string> topics = {
      "(NP (DT The) (NN report))", "(NP (DT The) (NN river))",
      "(NP (DT The) (NN study))",  "(NP (DT The) (NN bridge))",
      "(NP (DT The) (NN museum))", "(NP (DT The) (NN program))",
      "(NP (DT The) (NN forest))", "(NP (DT The) (NN system))",
  };
  return topics;
}

struct Person {
  const char *name;
  bool female;
};

const std::vector<Person> &People() {
  static const std::vector<Person> people = {
      {"Mary", true},   {"John", false}, {"Alice", true}, {"Peter", false},
      {"Laura", true},  {"David", false}, {"Emma", true}, {"Frank", false},
      {"Nora", true},   {"Oscar", false},
  };
  return people;
}

const char *kSurnames[] = {"Smith", "Jones", "Garcia", "Chen", "Novak", "Okafor"};
const char *kAdjectives[] = {"old", "young", "tired", "tall", "quiet", "nervous"};
const char *kSpeechVerbs[] = {"come", "go", "stay", "wait"};

const std::unordered_map<std::string, std::string> &LemmaTable() {
  static const std::unordered_map<std::string, std::string> table = [] {
    std::unordered_map<std::string, std::string> t;
    auto add = [&](const Verb &v) {
      t[v.past] = v.lemma;
      t[v.present] = v.lemma;
    };
    for (const auto &script : Scripts()) {
      for (const Verb &v : script) add(v);
    }
    for (const Verb &v : CareerVerbs()) add(v);
    for (const Verb &v : StateVerbs()) add(v);
    t["said"] = "say";
    t["did"] = "do";
    t["built"] = "build";
    return t;
  }();
  return table;
}

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void CollectTokens(const ParseTree &node, std::vector<Token> &out) {
  if (node.is_leaf()) {
    Token t;
    t.text = *node.terminal();
    t.pos = node.label();
    auto it = LemmaTable().find(t.text);
    t.lemma = it != LemmaTable().end() ? it->second : Lowercase(t.text);
    t.index = static_cast<int>(out.size());
    out.push_back(std::move(t));
    return;
  }
  for (const ParseTree &c : node.children()) CollectTokens(c, out);
}

std::string Vp(const Verb &v, bool past) {
  std::string tag = past ? "VBD" : "VBZ";
  std::string s = "(VP (" + tag + " " + (past ? v.past : v.present) + ")";
  if (*v.particle) s += std::string(" (PRT (RP ") + v.particle + "))";
  if (*v.complement) s += std::string(" ") + v.complement;
  return s + ")";
}

struct Subject {
  std::string ptb;
  int tokens = 1;
  NerLabel ner = NerLabel::kNone;
  bool gendered = false;
  bool in_chain = true;
};

struct Prefix {
  const char *ptb;
  int tokens;
};

const Prefix kPrefixes[] = {
    {"", 0},
    {"(ADVP (RB Then))", 1},
    {"(ADVP (RB Later))", 1},
    {"(PP (IN After) (NP (DT that))) (, ,)", 3},
};

class ParagraphBuilder {
 public:
  ParagraphBuilder(std::string doc_id, int index) {
    p_.doc_id = std::move(doc_id);
    p_.paragraph_index = index;
  }

  // Adds a sentence and returns its index.
  int Add(const std::string &ptb) {
    p_.sentences.push_back(MakeSentence(ptb));
    return static_cast<int>(p_.sentences.size()) - 1;
  }

  void Mention(int64_t chain_id, int sentence, int start, int end, NerLabel ner,
               bool gendered) {
    auto it = std::find_if(p_.chains.begin(), p_.chains.end(),
                           [&](const EntityChain &c) { return c.chain_id == chain_id; });
    if (it == p_.chains.end()) {
      p_.chains.push_back({chain_id, {}});
      it = p_.chains.end() - 1;
    }
    it->mentions.push_back({sentence, start, end, ner, gendered});
  }

  ParagraphRecord Finish() { return std::move(p_); }

 private:
  ParagraphRecord p_;
};

class Generator {
 public:
  explicit Generator(uint64_t seed) : rng_(seed) {}

  ParagraphRecord Narrative(const std::string &doc_id, int index, const Person &hero,
                            bool weak) {
    ParagraphBuilder b(doc_id, index);
    const auto &script = Scripts()[rng_.Uniform(Scripts().size())];
    const size_t n = 4 + rng_.Uniform(std::min<size_t>(3, script.size() - 3));
    const size_t start = rng_.Uniform(script.size() - n + 1);

    // Which sentences get a rule-conforming subject.
    std::vector<bool> conforming(n, true);
    if (weak) {
      const size_t lo = (3 * n + 9) / 10;  // ceil(0.3 n)
      const size_t hi = n / 2;
      const size_t k = lo + rng_.Uniform(hi - lo + 1);
      std::vector<size_t> order(n - 1);
      std::iota(order.begin(), order.end(), 1);
      rng_.Shuffle(order);
      conforming.assign(n, false);
      for (size_t i = 0; i < k; ++i) conforming[order[i]] = true;
    } else if (n >= 5 && rng_.Bernoulli(0.3)) {
      conforming[1 + rng_.Uniform(n - 1)] = false;
    }

    const std::string adjective = kAdjectives[rng_.Uniform(std::size(kAdjectives))];
    const std::string noun = hero.female ? "woman" : "man";
    for (size_t i = 0; i < n; ++i) {
      Subject subj;
      if (!conforming[i]) {
        subj.ptb = "(NP (DT " + std::string(i == 0 ? "The" : "the") + ") (JJ " +
                   adjective + ") (NN " + noun + "))";
        subj.tokens = 3;
      } else if (i == 0 || rng_.Bernoulli(0.25)) {
        subj.ptb = std::string("(NP (NNP ") + hero.name + "))";
        subj.ner = NerLabel::kPerson;
      } else {
        subj.ptb = std::string("(NP (PRP ") + (hero.female ? "She" : "He") + "))";
        subj.gendered = true;
      }
      const Prefix &prefix =
          i == 0 ? kPrefixes[0] : kPrefixes[rng_.Uniform(std::size(kPrefixes))];
      std::string ptb = "(S ";
      if (prefix.tokens > 0) ptb += std::string(prefix.ptb) + " ";
      ptb += subj.ptb + " " + Vp(script[start + i], true) + " (. .))";
      const int s = b.Add(ptb);
      b.Mention(1, s, prefix.tokens, prefix.tokens + subj.tokens - 1, subj.ner,
                subj.gendered);
    }
    return b.Finish();
  }

  ParagraphRecord Expository(const std::string &doc_id, int index) {
    ParagraphBuilder b(doc_id, index);
    const std::string surname = kSurnames[rng_.Uniform(std::size(kSurnames))];
    const size_t n = 5 + rng_.Uniform(2);
    std::vector<bool> past(n, false);
    past[0] = true;
    past[1 + rng_.Uniform(n - 1)] = true;
    const std::string topic = Topics()[rng_.Uniform(Topics().size())];
    bool named = false;
    for (size_t i = 0; i < n; ++i) {
      if (past[i]) {
        const Verb &v = CareerVerbs()[rng_.Uniform(CareerVerbs().size())];
        const bool use_name = !named;
        named = true;
        const std::string subj =
            use_name ? "(NP (NNP " + surname + "))" : std::string("(NP (PRP He))");
        const int s = b.Add("(S " + subj + " " + Vp(v, true) + " (. .))");
        b.Mention(100 + index, s, 0, 0, use_name ? NerLabel::kPerson : NerLabel::kNone,
                  !use_name);
      } else {
        const Verb &v = StateVerbs()[rng_.Uniform(StateVerbs().size())];
        const std::string subj = rng_.Bernoulli(0.5) ? topic : "(NP (PRP It))";
        b.Add("(S " + subj + " " + Vp(v, false) + " (. .))");
      }
    }
    return b.Finish();
  }

  ParagraphRecord Generic(const std::string &doc_id, int index) {
    ParagraphBuilder b(doc_id, index);
    const size_t n = 4 + rng_.Uniform(3);
    const std::string topic = Topics()[rng_.Uniform(Topics().size())];
    const bool with_past = rng_.Bernoulli(0.4);
    const size_t past_at = rng_.Uniform(n);
    const bool with_org = rng_.Bernoulli(0.3) && n >= 5;
    const size_t org_at = rng_.Uniform(n);
    for (size_t i = 0; i < n; ++i) {
      if (with_past && i == past_at) {
        b.Add("(S (NP (NNS Engineers)) (VP (VBD built) (NP (DT the) (NN dam))) (. .))");
        continue;
      }
      const Verb &v = StateVerbs()[rng_.Uniform(StateVerbs().size())];
      if (with_org && i == org_at) {
        const int s = b.Add("(S (NP (NNP Acme)) " + Vp(v, false) + " (. .))");
        b.Mention(200 + index, s, 0, 0, NerLabel::kOrganization, false);
        continue;
      }
      const std::string subj = rng_.Bernoulli(0.6) ? topic : "(NP (PRP It))";
      b.Add("(S " + subj + " " + Vp(v, false) + " (. .))");
    }
    return b.Finish();
  }

  ParagraphRecord Dialogue(const std::string &doc_id, int index, const Person &hero) {
    ParagraphBuilder b(doc_id, index);
    const char *pronoun = hero.female ? "she" : "he";
    const auto &script = Scripts()[rng_.Uniform(Scripts().size())];
    for (int i = 0; i < 5; ++i) {
      int s;
      if (i == 1 || i == 3) {
        const std::string verb = kSpeechVerbs[rng_.Uniform(std::size(kSpeechVerbs))];
        s = b.Add("(S (`` ``) (S (NP (PRP I)) (VP (MD will) (VP (VB " + verb +
                  ")))) (, ,) ('' '') (NP (PRP " + pronoun + ")) (VP (VBD said)) (. .))");
        b.Mention(1, s, 6, 6, NerLabel::kNone, true);
      } else if (i == 2) {
        b.Add(std::string("(SBARQ (WHADVP (WRB Where)) (SQ (VBD did) (NP (PRP ") +
              pronoun + ")) (VP (VB go))) (. ?))");
      } else {
        s = b.Add(std::string("(S (NP (NNP ") + hero.name + ")) " +
                  Vp(script[rng_.Uniform(script.size())], true) + " (. .))");
        b.Mention(1, s, 0, 0, NerLabel::kPerson, false);
      }
    }
    return b.Finish();
  }

  PlantedKind DrawKind(const std::vector<double> &weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    double u = rng_.UniformDouble() * total;
    for (size_t k = 0; k < weights.size(); ++k) {
      if (u < weights[k]) return static_cast<PlantedKind>(k);
      u -= weights[k];
    }
    return static_cast<PlantedKind>(weights.size() - 1);
  }

  Rng &rng() { return rng_; }

 private:
  Rng rng_;
};

}  // namespace

std::string_view PlantedKindName(PlantedKind kind) {
  switch (kind) {
    case PlantedKind::kSeedNarrative: return "seed_narrative";
    case PlantedKind::kWeakNarrative: return "weak_narrative";
    case PlantedKind::kExpository: return "expository";
    case PlantedKind::kGeneric: return "generic";
    case PlantedKind::kDialogue: return "dialogue";
  }
  return "unknown";
}

bool IsNarrativeKind(PlantedKind kind) {
  return kind == PlantedKind::kSeedNarrative || kind == PlantedKind::kWeakNarrative;
}

SentenceAnnotation MakeSentence(std::string_view ptb) {
  SentenceAnnotation s;
  s.tree = ParsePtb(ptb);
  CollectTokens(s.tree, s.tokens);
  for (size_t i = 0; i < s.tokens.size(); ++i) {
    if (i > 0) s.raw_text += ' ';
    s.raw_text += s.tokens[i].text;
  }
  return s;
}

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticConfig &cfg) {
  if (cfg.weights.size() != 5) throw InvalidArgument("need one weight per planted kind");
  for (double w : cfg.weights) {
    if (!(w >= 0)) throw InvalidArgument("planted kind weights must be non-negative");
  }
  if (std::accumulate(cfg.weights.begin(), cfg.weights.end(), 0.0) <= 0) {
    throw InvalidArgument("planted kind weights sum to zero");
  }
  Generator gen(cfg.seed);
  SyntheticCorpus out;
  for (size_t d = 0; d < cfg.documents; ++d) {
    DocumentRecord doc;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "syn%05zu", d);
    doc.doc_id = buf;
    const Person &hero = People()[gen.rng().Uniform(People().size())];
    for (size_t i = 0; i < cfg.paragraphs_per_document; ++i) {
      const int index = static_cast<int>(i);
      const PlantedKind kind = gen.DrawKind(cfg.weights);
      ParagraphRecord p;
      switch (kind) {
        case PlantedKind::kSeedNarrative:
          p = gen.Narrative(doc.doc_id, index, hero, false);
          break;
        case PlantedKind::kWeakNarrative:
          p = gen.Narrative(doc.doc_id, index, hero, true);
          break;
        case PlantedKind::kExpository:
          p = gen.Expository(doc.doc_id, index);
          break;
        case PlantedKind::kGeneric:
          p = gen.Generic(doc.doc_id, index);
          break;
        case PlantedKind::kDialogue:
          p = gen.Dialogue(doc.doc_id, index, hero);
          break;
      }
      out.truth[p.Id()] = kind;
      doc.paragraphs.push_back(std::move(p));
    }
    ValidateDocument(doc);
    out.documents.push_back(std::move(doc));
  }
  return out;
}

}  // namespace narrev
