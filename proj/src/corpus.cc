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

#include "narrev/corpus.h"

#include <algorithm>
#include <cctype>
#include <utility>

#include "json.hpp"
#include "narrev/error.h"

namespace narrev {

using json = nlohmann::json;

namespace {

Error ValidationError(const std::string &message) {
  return Error(ErrorCode::kValidation, message);
}

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c));
  });
}

template <typename T>
T Field(const json &obj, const char *key, const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception &) {
    throw ValidationError(where + ": field '" + key + "' has the wrong type");
  }
}

const json &ArrayField(const json &obj, const char *key,
                       const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    throw ValidationError(where + ": field '" + key + "' must be an array");
  }
  return *it;
}

SentenceAnnotation DecodeSentence(const json &js, const std::string &where) {
  if (!js.is_object()) throw ValidationError(where + ": not an object");
  SentenceAnnotation s;
  if (auto it = js.find("text"); it != js.end() && it->is_string()) {
    s.raw_text = it->get<std::string>();
  }
  int index = 0;
  for (const json &jt : ArrayField(js, "tokens", where)) {
    const std::string tw = where + " token " + std::to_string(index);
    if (!jt.is_object()) throw ValidationError(tw + ": not an object");
    Token tok;
    tok.text = Field<std::string>(jt, "t", tw);
    tok.pos = Field<std::string>(jt, "pos", tw);
    if (auto it = jt.find("lemma");
        it != jt.end() && it->is_string() && !it->get<std::string>().empty()) {
      tok.lemma = it->get<std::string>();
    } else {
      tok.lemma = Lowercase(tok.text);
    }
    tok.index = index++;
    s.tokens.push_back(std::move(tok));
  }
  const std::string tree_text = Field<std::string>(js, "tree", where);
  try {
    s.tree = ParsePtb(tree_text);
  } catch (const ParseError &e) {
    throw ValidationError(where + ": bad tree: " + e.what());
  }
  return s;
}

EntityChain DecodeChain(const json &jc, const std::string &where) {
  if (!jc.is_object()) throw ValidationError(where + ": not an object");
  EntityChain chain;
  chain.chain_id = Field<int64_t>(jc, "id", where);
  const std::string cw = where + " (id " + std::to_string(chain.chain_id) + ")";
  for (const json &jm : ArrayField(jc, "mentions", cw)) {
    if (!jm.is_object()) throw ValidationError(cw + ": mention not an object");
    EntityMention m;
    m.sentence_index = Field<int>(jm, "sent", cw);
    m.start = Field<int>(jm, "start", cw);
    m.end = Field<int>(jm, "end", cw);
    if (auto it = jm.find("ner"); it != jm.end()) {
      if (!it->is_string()) throw ValidationError(cw + ": ner must be a string");
      auto label = ParseNerLabel(it->get<std::string>());
      if (!label) {
        throw ValidationError(cw + ": unknown ner label '" +
                              it->get<std::string>() + "'");
      }
      m.ner = *label;
    }
    if (auto it = jm.find("gendered_pronoun"); it != jm.end()) {
      if (!it->is_boolean()) {
        throw ValidationError(cw + ": gendered_pronoun must be a boolean");
      }
      m.gendered_pronoun = it->get<bool>();
    }
    chain.mentions.push_back(m);
  }
  std::stable_sort(chain.mentions.begin(), chain.mentions.end(),
                   [](const EntityMention &a, const EntityMention &b) {
                     return std::tie(a.sentence_index, a.start) <
                            std::tie(b.sentence_index, b.start);
                   });
  return chain;
}

}  // namespace

std::string_view NerLabelName(NerLabel label) {
  switch (label) {
    case NerLabel::kPerson:
      return "PERSON";
    case NerLabel::kOrganization:
      return "ORGANIZATION";
    case NerLabel::kOther:
      return "OTHER";
    case NerLabel::kNone:
      return "NONE";
  }
  return "NONE";
}

std::optional<NerLabel> ParseNerLabel(std::string_view name) {
  if (name == "PERSON") return NerLabel::kPerson;
  if (name == "ORGANIZATION") return NerLabel::kOrganization;
  if (name == "OTHER") return NerLabel::kOther;
  if (name == "NONE") return NerLabel::kNone;
  return std::nullopt;
}

std::string ParagraphRecord::Id() const {
  return doc_id + "#" + std::to_string(paragraph_index);
}

ParagraphWindow MakeWindow(const DocumentRecord &doc, size_t i) {
  if (i >= doc.paragraphs.size()) {
    throw InvalidArgument("paragraph index " + std::to_string(i) +
                          " out of range for document '" + doc.doc_id +
                          "' with " + std::to_string(doc.paragraphs.size()) +
                          " paragraphs");
  }
  ParagraphWindow w;
  w.target = &doc.paragraphs[i];
  if (i > 0) w.prev = &doc.paragraphs[i - 1];
  if (i + 1 < doc.paragraphs.size()) w.next = &doc.paragraphs[i + 1];
  return w;
}

void ValidateDocument(const DocumentRecord &doc) {
  if (doc.doc_id.empty()) throw ValidationError("empty doc_id");
  for (size_t p = 0; p < doc.paragraphs.size(); ++p) {
    const ParagraphRecord &para = doc.paragraphs[p];
    const std::string pw = "paragraph " + std::to_string(p);
    if (para.paragraph_index != static_cast<int>(p)) {
      throw ValidationError(pw + ": paragraph_index is not consecutive");
    }
    if (para.sentences.empty()) throw ValidationError(pw + ": no sentences");
    for (size_t s = 0; s < para.sentences.size(); ++s) {
      const SentenceAnnotation &sent = para.sentences[s];
      const std::string sw = pw + " sentence " + std::to_string(s);
      if (sent.tokens.empty()) throw ValidationError(sw + ": no tokens");
      for (size_t t = 0; t < sent.tokens.size(); ++t) {
        const Token &tok = sent.tokens[t];
        if (tok.index != static_cast<int>(t)) {
          throw ValidationError(sw + ": token indices are not consecutive");
        }
        if (tok.text.empty() || IsBlank(tok.text)) {
          throw ValidationError(sw + " token " + std::to_string(t) +
                                ": empty text");
        }
        if (tok.pos.empty() || IsBlank(tok.pos)) {
          throw ValidationError(sw + " token " + std::to_string(t) +
                                ": empty pos");
        }
      }
      if (sent.tree.label().empty() && sent.tree.children().empty() &&
          !sent.tree.terminal()) {
        throw ValidationError(sw + ": missing tree");
      }
      std::vector<std::string> words = sent.tree.Words();
      if (words.size() != sent.tokens.size()) {
        throw ValidationError(sw + ": tree has " + std::to_string(words.size()) +
                              " leaves but sentence has " +
                              std::to_string(sent.tokens.size()) + " tokens");
      }
      for (size_t t = 0; t < words.size(); ++t) {
        if (words[t] != sent.tokens[t].text) {
          throw ValidationError(sw + ": tree leaf " + std::to_string(t) + " '" +
                                words[t] + "' does not match token '" +
                                sent.tokens[t].text + "'");
        }
      }
    }
    for (const EntityChain &chain : para.chains) {
      const std::string cw =
          pw + " chain " + std::to_string(chain.chain_id);
      if (chain.mentions.empty()) throw ValidationError(cw + ": no mentions");
      for (const EntityMention &m : chain.mentions) {
        if (m.sentence_index < 0 ||
            m.sentence_index >= static_cast<int>(para.sentences.size())) {
          throw ValidationError(cw + ": mention references sentence " +
                                std::to_string(m.sentence_index) + " but the "
                                "paragraph has " +
                                std::to_string(para.sentences.size()));
        }
        const int n_tokens =
            static_cast<int>(para.sentences[m.sentence_index].tokens.size());
        if (m.start < 0 || m.end < m.start || m.end >= n_tokens) {
          throw ValidationError(cw + ": mention span [" +
                                std::to_string(m.start) + ", " +
                                std::to_string(m.end) +
                                "] outside sentence of " +
                                std::to_string(n_tokens) + " tokens");
        }
      }
    }
  }
}

DocumentRecord ParseDocumentJson(std::string_view line) {
  json js;
  try {
    js = json::parse(line);
  } catch (const json::parse_error &e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  if (!js.is_object()) throw ValidationError("document is not a JSON object");
  DocumentRecord doc;
  doc.doc_id = Field<std::string>(js, "doc_id", "document");
  const std::string dw = "document '" + doc.doc_id + "'";
  int p_index = 0;
  for (const json &jp : ArrayField(js, "paragraphs", dw)) {
    const std::string pw = dw + " paragraph " + std::to_string(p_index);
    if (!jp.is_object()) throw ValidationError(pw + ": not an object");
    ParagraphRecord para;
    para.doc_id = doc.doc_id;
    para.paragraph_index = p_index++;
    int s_index = 0;
    for (const json &js_sent : ArrayField(jp, "sentences", pw)) {
      para.sentences.push_back(
          DecodeSentence(js_sent, pw + " sentence " + std::to_string(s_index++)));
    }
    if (auto it = jp.find("chains"); it != jp.end()) {
      if (!it->is_array()) throw ValidationError(pw + ": chains must be an array");
      for (const json &jc : *it) {
        para.chains.push_back(DecodeChain(jc, pw + " chain"));
      }
    }
    doc.paragraphs.push_back(std::move(para));
  }
  try {
    ValidateDocument(doc);
  } catch (const Error &e) {
    throw ValidationError(dw + ": " + e.what());
  }
  return doc;
}

std::string DocumentToJson(const DocumentRecord &doc) {
  json jparas = json::array();
  for (const ParagraphRecord &para : doc.paragraphs) {
    json jsents = json::array();
    for (const SentenceAnnotation &s : para.sentences) {
      json jtoks = json::array();
      for (const Token &t : s.tokens) {
        jtoks.push_back({{"t", t.text}, {"pos", t.pos}, {"lemma", t.lemma}});
      }
      jsents.push_back(
          {{"text", s.raw_text}, {"tokens", jtoks}, {"tree", s.tree.ToString()}});
    }
    json jchains = json::array();
    for (const EntityChain &c : para.chains) {
      json jm = json::array();
      for (const EntityMention &m : c.mentions) {
        jm.push_back({{"sent", m.sentence_index},
                      {"start", m.start},
                      {"end", m.end},
                      {"ner", NerLabelName(m.ner)},
                      {"gendered_pronoun", m.gendered_pronoun}});
      }
      jchains.push_back({{"id", c.chain_id}, {"mentions", jm}});
    }
    jparas.push_back({{"sentences", jsents}, {"chains", jchains}});
  }
  json js = {{"doc_id", doc.doc_id}, {"paragraphs", jparas}};
  return js.dump();
}

CorpusReader::CorpusReader(std::istream &in, OnBadRecord policy)
    : in_(&in), policy_(policy) {}

CorpusReader::CorpusReader(const std::string &path, OnBadRecord policy)
    : owned_(std::make_unique<std::ifstream>(path)),
      in_(owned_.get()),
      policy_(policy) {
  if (!*owned_) throw Error(ErrorCode::kIo, "cannot open corpus '" + path + "'");
}

std::optional<DocumentRecord> CorpusReader::Next() {
  std::string line;
  while (std::getline(*in_, line)) {
    ++line_;
    if (IsBlank(line)) continue;
    try {
      return ParseDocumentJson(line);
    } catch (const Error &e) {
      CorpusIssue issue;
      issue.line = line_;
      try {
        json js = json::parse(line);
        if (js.is_object() && js.contains("doc_id") &&
            js["doc_id"].is_string()) {
          issue.doc_id = js["doc_id"].get<std::string>();
        }
      } catch (const json::exception &) {
      }
      issue.message = e.what();
      if (policy_ == OnBadRecord::kAbort) {
        throw Error(ErrorCode::kValidation,
                    "line " + std::to_string(line_) + ": " + issue.message);
      }
      issues_.push_back(std::move(issue));
    }
  }
  return std::nullopt;
}

std::vector<DocumentRecord> LoadCorpus(const std::string &path) {
  CorpusReader reader(path, OnBadRecord::kAbort);
  std::vector<DocumentRecord> docs;
  while (auto doc = reader.Next()) docs.push_back(std::move(*doc));
  return docs;
}

Corpus::Corpus(std::vector<DocumentRecord> docs) : docs_(std::move(docs)) {
  for (size_t d = 0; d < docs_.size(); ++d) {
    for (size_t p = 0; p < docs_[d].paragraphs.size(); ++p) {
      const std::string id = docs_[d].paragraphs[p].Id();
      if (!by_id_.emplace(id, refs_.size()).second) {
        throw Error(ErrorCode::kValidation, "duplicate paragraph id '" + id + "'");
      }
      refs_.push_back({d, p});
    }
  }
}

const ParagraphRecord &Corpus::paragraph(size_t i) const {
  const ParagraphRef &r = refs_.at(i);
  return docs_[r.doc].paragraphs[r.paragraph];
}

ParagraphWindow Corpus::window(size_t i) const {
  const ParagraphRef &r = refs_.at(i);
  return MakeWindow(docs_[r.doc], r.paragraph);
}

std::optional<size_t> Corpus::Find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

}  // namespace narrev
