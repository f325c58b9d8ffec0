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

// Annotated corpus data model and the JSON Lines reader/writer.
//
// One document per line:
//   {"doc_id": str,
//    "paragraphs": [{"sentences": [{"text": str,
//                                   "tokens": [{"t", "pos", "lemma"}],
//                                   "tree": "<bracketed PTB>"}],
//                    "chains": [{"id": int,
//                                "mentions": [{"sent", "start", "end",
//                                              "ner", "gendered_pronoun"}]}]}]}
// Unknown fields are ignored. Mention spans are inclusive token ranges.

#ifndef NARREV_CORPUS_H_
#define NARREV_CORPUS_H_

#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "narrev/tree.h"

namespace narrev {

struct Token {
  std::string text;
  std::string pos;
  std::string lemma;
  int index = 0;

  bool operator==(const Token &) const = default;
};

enum class NerLabel { kPerson, kOrganization, kOther, kNone };

std::string_view NerLabelName(NerLabel label);
std::optional<NerLabel> ParseNerLabel(std::string_view name);

struct EntityMention {
  int sentence_index = 0;
  int start = 0;  // inclusive
  int end = 0;    // inclusive
  NerLabel ner = NerLabel::kNone;
  bool gendered_pronoun = false;

  bool operator==(const EntityMention &) const = default;
};

struct EntityChain {
  int64_t chain_id = 0;
  std::vector<EntityMention> mentions;  // sorted by (sentence, start)

  bool operator==(const EntityChain &) const = default;
};

struct SentenceAnnotation {
  std::vector<Token> tokens;
  ParseTree tree;
  std::string raw_text;

  bool operator==(const SentenceAnnotation &) const = default;
};

struct ParagraphRecord {
  std::string doc_id;
  int paragraph_index = 0;
  std::vector<SentenceAnnotation> sentences;
  std::vector<EntityChain> chains;

  // "doc_id#paragraph_index"; unique within a corpus.
  std::string Id() const;

  bool operator==(const ParagraphRecord &) const = default;
};

struct DocumentRecord {
  std::string doc_id;
  std::vector<ParagraphRecord> paragraphs;

  bool operator==(const DocumentRecord &) const = default;
};

// A target paragraph with its document neighbours.
struct ParagraphWindow {
  const ParagraphRecord *prev = nullptr;
  const ParagraphRecord *target = nullptr;
  const ParagraphRecord *next = nullptr;
};

// Throws InvalidArgument when i is out of range.
ParagraphWindow MakeWindow(const DocumentRecord &doc, size_t i);

// A record-level problem found while reading a corpus.
struct CorpusIssue {
  size_t line = 0;  // 1-based
  std::string doc_id;
  std::string message;
};

enum class OnBadRecord { kSkip, kAbort };

// Streaming reader. Documents are decoded and validated one line at a time.
// With kSkip, bad lines are recorded in issues() and skipped; with kAbort
// the first bad line throws a validation Error naming the line.
class CorpusReader {
 public:
  CorpusReader(std::istream &in, OnBadRecord policy = OnBadRecord::kAbort);
  // Opens `path`; throws an I/O Error if it cannot be read.
  explicit CorpusReader(const std::string &path,
                        OnBadRecord policy = OnBadRecord::kAbort);

  std::optional<DocumentRecord> Next();

  const std::vector<CorpusIssue> &issues() const { return issues_; }
  size_t lines_read() const { return line_; }

 private:
  std::unique_ptr<std::ifstream> owned_;
  std::istream *in_;
  OnBadRecord policy_;
  size_t line_ = 0;
  std::vector<CorpusIssue> issues_;
};

// Reads an entire corpus file (abort on the first bad record).
std::vector<DocumentRecord> LoadCorpus(const std::string &path);

// Decodes and validates one JSON line; throws a validation Error.
DocumentRecord ParseDocumentJson(std::string_view line);

// Encodes a document as a single JSON line (no trailing newline).
std::string DocumentToJson(const DocumentRecord &doc);

// Checks every data-model invariant; throws a validation Error naming the
// offending paragraph, sentence or chain.
void ValidateDocument(const DocumentRecord &doc);

// Flattened view of an in-memory corpus: paragraph i lives at
// docs[ref.doc].paragraphs[ref.paragraph].
struct ParagraphRef {
  size_t doc = 0;
  size_t paragraph = 0;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<DocumentRecord> docs);

  const std::vector<DocumentRecord> &documents() const { return docs_; }
  size_t paragraph_count() const { return refs_.size(); }
  const ParagraphRecord &paragraph(size_t i) const;
  ParagraphWindow window(size_t i) const;
  // Index of the paragraph with the given Id(), or nullopt.
  std::optional<size_t> Find(std::string_view id) const;

 private:
  std::vector<DocumentRecord> docs_;
  std::vector<ParagraphRef> refs_;
  std::unordered_map<std::string, size_t> by_id_;
};

}  // namespace narrev

#endif  // NARREV_CORPUS_H_
