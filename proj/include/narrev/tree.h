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

// Penn Treebank style constituency trees and grammar productions.

#ifndef NARREV_TREE_H_
#define NARREV_TREE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace narrev {

// A constituency tree node. A node carries either children or a terminal
// word, never both; a node with a terminal is a preterminal (POS tag over a
// word).
class ParseTree {
 public:
  ParseTree() = default;
  static ParseTree Leaf(std::string label, std::string word);
  static ParseTree Node(std::string label, std::vector<ParseTree> children);

  const std::string &label() const { return label_; }
  const std::vector<ParseTree> &children() const { return children_; }
  const std::optional<std::string> &terminal() const { return terminal_; }

  bool is_leaf() const { return terminal_.has_value(); }
  // Internal node with children (not a POS-over-word node).
  bool is_phrase() const { return !is_leaf(); }

  // Canonical bracketed form: single spaces, no newlines, labels verbatim.
  std::string ToString() const;

  // Words at the leaves, left to right.
  std::vector<std::string> Words() const;
  size_t LeafCount() const;

  bool operator==(const ParseTree &other) const = default;

 private:
  void AppendTo(std::string *out) const;

  std::string label_;
  std::vector<ParseTree> children_;
  std::optional<std::string> terminal_;
};

// Parses a bracketed tree such as "(S (NP (PRP He)) (VP (VBD ran)))".
// Throws ParseError naming the byte offset on unbalanced parentheses,
// empty constituents, or trailing garbage.
ParseTree ParsePtb(std::string_view text);

// One grammar production. `lexical` is true only for POS -> word rules.
struct ProductionRule {
  std::string lhs;
  std::vector<std::string> rhs;
  bool lexical = false;

  // "S -> NP VP"
  std::string ToString() const;
  // Feature key form, "S→NP VP".
  std::string Key() const;

  bool operator==(const ProductionRule &other) const = default;
  auto operator<=>(const ProductionRule &other) const = default;
};

// Parses "S -> NP VP" (an arrow "→" is also accepted).
ProductionRule ParseProductionRule(std::string_view text);

// The non-lexical productions of `tree`, one per phrase node in preorder.
// Preterminal (POS -> word) productions are excluded.
std::vector<ProductionRule> ExtractProductionRules(const ParseTree &tree);

// The production at a single phrase node.
ProductionRule ProductionAt(const ParseTree &node);

// Tags of punctuation preterminals (",", ".", ":", quotes, brackets).
bool IsPunctuationTag(std::string_view tag);

// Strips ROOT / TOP / unlabeled single-child wrappers.
const ParseTree &UnwrapRoot(const ParseTree &tree);

// Child labels of `node` with punctuation preterminals removed.
std::vector<std::string> ContentChildLabels(const ParseTree &node);

// 0-based leaf position of `target` (a node within `root`), counting leaves
// before it; nullopt when target is not in the tree.
std::optional<size_t> LeafIndexOf(const ParseTree &root,
                                  const ParseTree &target);

}  // namespace narrev

#endif  // NARREV_TREE_H_
