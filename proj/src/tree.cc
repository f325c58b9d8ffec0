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

#include "narrev/tree.h"

#include <cctype>
#include <utility>

#include "narrev/error.h"

namespace narrev {

ParseTree ParseTree::Leaf(std::string label, std::string word) {
  ParseTree t;
  t.label_ = std::move(label);
  t.terminal_ = std::move(word);
  return t;
}

ParseTree ParseTree::Node(std::string label, std::vector<ParseTree> children) {
  if (children.empty()) {
    throw InvalidArgument("tree node '" + label + "' has no children");
  }
  ParseTree t;
  t.label_ = std::move(label);
  t.children_ = std::move(children);
  return t;
}

void ParseTree::AppendTo(std::string *out) const {
  out->push_back('(');
  out->append(label_);
  if (terminal_) {
    out->push_back(' ');
    out->append(*terminal_);
  } else {
    for (const ParseTree &c : children_) {
      out->push_back(' ');
      c.AppendTo(out);
    }
  }
  out->push_back(')');
}

std::string ParseTree::ToString() const {
  std::string out;
  AppendTo(&out);
  return out;
}

std::vector<std::string> ParseTree::Words() const {
  std::vector<std::string> words;
  std::vector<const ParseTree *> stack = {this};
  while (!stack.empty()) {
    const ParseTree *n = stack.back();
    stack.pop_back();
    if (n->terminal_) {
      words.push_back(*n->terminal_);
      continue;
    }
    for (auto it = n->children_.rbegin(); it != n->children_.rend(); ++it) {
      stack.push_back(&*it);
    }
  }
  return words;
}

size_t ParseTree::LeafCount() const {
  if (terminal_) return 1;
  size_t n = 0;
  for (const ParseTree &c : children_) n += c.LeafCount();
  return n;
}

namespace {

class PtbParser {
 public:
  explicit PtbParser(std::string_view text) : text_(text) {}

  ParseTree ParseAll() {
    SkipSpace();
    if (pos_ >= text_.size()) throw ParseError("empty input", pos_);
    ParseTree tree = ParseNode();
    SkipSpace();
    if (pos_ != text_.size()) throw ParseError("trailing garbage", pos_);
    return tree;
  }

 private:
  static bool IsAtomChar(char c) {
    return c != '(' && c != ')' &&
           !std::isspace(static_cast<unsigned char>(c));
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  std::string ReadAtom() {
    size_t start = pos_;
    while (pos_ < text_.size() && IsAtomChar(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  ParseTree ParseNode() {
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    if (text_[pos_] != '(') throw ParseError("expected '('", pos_);
    const size_t open = pos_;
    ++pos_;
    SkipSpace();
    std::string label = ReadAtom();
    SkipSpace();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);

    if (text_[pos_] == ')') {
      throw ParseError("empty constituent", open);
    }
    if (text_[pos_] != '(') {
      std::string word = ReadAtom();
      SkipSpace();
      if (pos_ >= text_.size()) {
        throw ParseError("unexpected end of input", pos_);
      }
      if (text_[pos_] != ')') {
        throw ParseError("expected ')' after terminal", pos_);
      }
      ++pos_;
      if (label.empty()) throw ParseError("terminal without a label", open);
      return ParseTree::Leaf(std::move(label), std::move(word));
    }

    std::vector<ParseTree> children;
    while (true) {
      SkipSpace();
      if (pos_ >= text_.size()) {
        throw ParseError("unexpected end of input", pos_);
      }
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      if (text_[pos_] != '(') {
        throw ParseError("terminal mixed with child constituents", pos_);
      }
      children.push_back(ParseNode());
    }
    return ParseTree::Node(std::move(label), std::move(children));
  }

  std::string_view text_;
  size_t pos_ = 0;
};

void CollectRules(const ParseTree &node, std::vector<ProductionRule> *out) {
  if (node.is_leaf()) return;
  out->push_back(ProductionAt(node));
  for (const ParseTree &c : node.children()) CollectRules(c, out);
}

bool FindLeafIndex(const ParseTree &node, const ParseTree &target,
                   size_t *count) {
  if (&node == &target) return true;
  if (node.is_leaf()) {
    ++*count;
    return false;
  }
  for (const ParseTree &c : node.children()) {
    if (FindLeafIndex(c, target, count)) return true;
  }
  return false;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

ParseTree ParsePtb(std::string_view text) { return PtbParser(text).ParseAll(); }

std::string ProductionRule::ToString() const {
  std::string out = lhs + " ->";
  for (const std::string &r : rhs) out += " " + r;
  return out;
}

std::string ProductionRule::Key() const {
  std::string out = lhs + "→";
  for (size_t i = 0; i < rhs.size(); ++i) {
    if (i > 0) out += " ";
    out += rhs[i];
  }
  return out;
}

ProductionRule ParseProductionRule(std::string_view text) {
  static constexpr std::string_view kArrows[] = {"->", "→"};
  size_t at = std::string_view::npos;
  size_t len = 0;
  for (std::string_view arrow : kArrows) {
    at = text.find(arrow);
    if (at != std::string_view::npos) {
      len = arrow.size();
      break;
    }
  }
  if (at == std::string_view::npos) {
    throw Error(ErrorCode::kParse,
                "production rule has no arrow: '" + std::string(text) + "'");
  }
  ProductionRule rule;
  rule.lhs = std::string(Trim(text.substr(0, at)));
  std::string_view rest = text.substr(at + len);
  size_t i = 0;
  while (i < rest.size()) {
    while (i < rest.size() &&
           std::isspace(static_cast<unsigned char>(rest[i]))) {
      ++i;
    }
    size_t start = i;
    while (i < rest.size() &&
           !std::isspace(static_cast<unsigned char>(rest[i]))) {
      ++i;
    }
    if (i > start) rule.rhs.emplace_back(rest.substr(start, i - start));
  }
  if (rule.lhs.empty() || rule.rhs.empty()) {
    throw Error(ErrorCode::kParse,
                "malformed production rule: '" + std::string(text) + "'");
  }
  return rule;
}

ProductionRule ProductionAt(const ParseTree &node) {
  ProductionRule rule;
  rule.lhs = node.label();
  if (node.is_leaf()) {
    rule.rhs.push_back(*node.terminal());
    rule.lexical = true;
    return rule;
  }
  for (const ParseTree &c : node.children()) rule.rhs.push_back(c.label());
  return rule;
}

std::vector<ProductionRule> ExtractProductionRules(const ParseTree &tree) {
  std::vector<ProductionRule> rules;
  CollectRules(tree, &rules);
  return rules;
}

bool IsPunctuationTag(std::string_view tag) {
  static constexpr std::string_view kTags[] = {
      ",", ".", ":", "``", "''", "-LRB-", "-RRB-", "HYPH", "NFP", "#"};
  for (std::string_view t : kTags) {
    if (tag == t) return true;
  }
  return false;
}

const ParseTree &UnwrapRoot(const ParseTree &tree) {
  const ParseTree *node = &tree;
  while (node->is_phrase() && node->children().size() == 1 &&
         (node->label() == "ROOT" || node->label() == "TOP" ||
          node->label().empty())) {
    node = &node->children().front();
  }
  return *node;
}

std::vector<std::string> ContentChildLabels(const ParseTree &node) {
  std::vector<std::string> labels;
  for (const ParseTree &c : node.children()) {
    if (c.is_leaf() && IsPunctuationTag(c.label())) continue;
    labels.push_back(c.label());
  }
  return labels;
}

std::optional<size_t> LeafIndexOf(const ParseTree &root,
                                  const ParseTree &target) {
  size_t count = 0;
  if (FindLeafIndex(root, target, &count)) return count;
  return std::nullopt;
}

}  // namespace narrev
