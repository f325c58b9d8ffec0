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


#include "test_util.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "narrev/synthetic.h"

namespace narrev::testing {

namespace fs = std::filesystem;

std::string DataPath(const std::string &name) {
  return (fs::path(NARREV_DATA_DIR) / name).string();
}

TempDir::TempDir() {
  static int counter = 0;
  Rng rng(static_cast<uint64_t>(std::hash<std::string>()(fs::current_path().string())) ^
          static_cast<uint64_t>(::getpid()));
  for (;;) {
    path_ = fs::temp_directory_path() /
            ("narrev_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++) + "_" + std::to_string(rng.Uniform(1u << 30)));
    if (fs::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

ParagraphRecord MakeParagraph(const std::string &doc_id, int index,
                              const std::vector<std::string> &ptbs,
                              std::vector<EntityChain> chains) {
  ParagraphRecord p;
  p.doc_id = doc_id;
  p.paragraph_index = index;
  for (const std::string &ptb : ptbs) p.sentences.push_back(MakeSentence(ptb));
  p.chains = std::move(chains);
  return p;
}

EntityChain MakeChain(int64_t id, const std::vector<std::pair<int, int>> &at,
                      NerLabel ner) {
  EntityChain c;
  c.chain_id = id;
  for (const auto &[s, t] : at) c.mentions.push_back({s, t, t, ner, false});
  return c;
}

Sequences RandomSequences(Rng &rng, size_t max_seqs, size_t vocab, size_t max_len) {
  Sequences out(1 + rng.Uniform(max_seqs));
  for (auto &seq : out) {
    seq.resize(1 + rng.Uniform(max_len));
    for (auto &e : seq) e = "e" + std::to_string(rng.Uniform(vocab));
  }
  return out;
}

size_t GranularityMatches(const std::vector<std::string> &extracted,
                          const std::vector<std::string> &expected) {
  auto lemma = [](const std::string &e) { return e.substr(0, e.find('_')); };
  const size_t n = extracted.size();
  const size_t m = expected.size();
  std::vector<std::vector<size_t>> lcs(n + 1, std::vector<size_t>(m + 1, 0));
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const bool match = extracted[i - 1] == expected[j - 1] ||
                         lemma(extracted[i - 1]) == lemma(expected[j - 1]);
      lcs[i][j] = match ? lcs[i - 1][j - 1] + 1 : std::max(lcs[i - 1][j], lcs[i][j - 1]);
    }
  }
  return lcs[n][m];
}

namespace oracle {

int64_t Count(const Sequences &seqs, const std::string &a, const std::string &b, int d) {
  int64_t n = 0;
  for (const auto &s : seqs) {
    for (size_t i = 0; i + d < s.size(); ++i) {
      if (s[i] == a && s[i + d] == b) ++n;
    }
  }
  return n;
}

int64_t Unigram(const Sequences &seqs, const std::string &e) {
  int64_t n = 0;
  for (const auto &s : seqs) {
    for (const auto &x : s) n += x == e ? 1 : 0;
  }
  return n;
}

int64_t Events(const Sequences &seqs) {
  int64_t n = 0;
  for (const auto &s : seqs) n += static_cast<int64_t>(s.size());
  return n;
}

int64_t Pairs(const Sequences &seqs, int d) {
  int64_t n = 0;
  for (const auto &s : seqs) {
    if (s.size() > static_cast<size_t>(d)) n += static_cast<int64_t>(s.size()) - d;
  }
  return n;
}

std::optional<double> Pmi(const Sequences &seqs, const std::string &a,
                          const std::string &b, int d) {
  const int64_t joint =
      a == b ? Count(seqs, a, a, d) : Count(seqs, a, b, d) + Count(seqs, b, a, d);
  const int64_t ua = Unigram(seqs, a);
  const int64_t ub = Unigram(seqs, b);
  if (joint == 0 || ua == 0 || ub == 0) return std::nullopt;
  const double n = static_cast<double>(Events(seqs));
  const double p_ab = static_cast<double>(joint) / static_cast<double>(Pairs(seqs, d));
  return std::log(p_ab) - std::log(ua / n) - std::log(ub / n);
}

std::optional<double> Cp(const Sequences &seqs, const std::string &a,
                         const std::string &b, int d) {
  int64_t fwd = Count(seqs, a, b, d);
  int64_t rev = Count(seqs, b, a, d);
  if (fwd == 0) return std::nullopt;
  if (rev == 0) {
    fwd += 1;
    rev += 1;
  }
  return *Pmi(seqs, a, b, d) + std::log(static_cast<double>(fwd)) -
         std::log(static_cast<double>(rev));
}

double WeightedCp(const Sequences &seqs, const std::string &a, const std::string &b) {
  double sum = 0.0;
  for (int d = 1; d <= 3; ++d) {
    if (auto v = Cp(seqs, a, b, d)) sum += *v / d;
  }
  return sum;
}

double Chain(const Sequences &seqs, const std::vector<std::string> &chain) {
  double sum = 0.0;
  for (int d = 1; d <= 3; ++d) {
    for (size_t j = 0; j + d < chain.size(); ++j) {
      sum += WeightedCp(seqs, chain[j], chain[j + d]) / d;
    }
  }
  return sum / static_cast<double>(chain.size() - 1);
}

}  // namespace oracle

}  // namespace narrev::testing
