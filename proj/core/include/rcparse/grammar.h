// Copyright 2026 The rcparse Authors.
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

#ifndef RCPARSE_GRAMMAR_H_
#define RCPARSE_GRAMMAR_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rcparse/losr.h"
#include "rcparse/treebank.h"

namespace rcparse {

// Grammar symbol: a feature preterminal or an element label.
struct Symbol {
  bool is_feature = false;
  FeatureName feature = FeatureName::kAction;
  Label label = Label::kEntity;

  static Symbol Of(FeatureName f) { return {true, f, Label::kEntity}; }
  static Symbol Of(Label l) { return {false, FeatureName::kAction, l}; }
  // Symbol of a node item: its feature name or its label.
  static Symbol Of(const Item &item);
  static std::optional<Symbol> Parse(std::string_view text);
  std::string ToString() const;

  friend bool operator==(const Symbol &a, const Symbol &b) { return a.Key() == b.Key(); }
  friend bool operator<(const Symbol &a, const Symbol &b) { return a.Key() < b.Key(); }

 private:
  std::pair<int, int> Key() const {
    return is_feature ? std::pair(0, static_cast<int>(feature))
                      : std::pair(1, static_cast<int>(label));
  }
};

struct Production {
  Label lhs = Label::kEntity;
  std::vector<Symbol> rhs;

  // "event -> action entity"
  std::string ToString() const;
  static Production Parse(std::string_view text);

  friend bool operator==(const Production &, const Production &) = default;
  friend bool operator<(const Production &a, const Production &b) {
    if (a.lhs != b.lhs) return a.lhs < b.lhs;
    return a.rhs < b.rhs;
  }
};

// Context-free productions read off gold trees. Trees are read with their
// id and reference-id features removed: those are added by anaphora
// resolution, never parsed.
class Grammar {
 public:
  static Grammar Induce(const std::vector<TreebankRecord> &records);

  void Add(const LosrNode &tree);
  void Add(Production production);

  const std::set<Production> &productions() const { return productions_; }
  // Productions whose last rhs symbol is `last`, in production order.
  const std::vector<const Production *> &EndingWith(const Symbol &last) const;
  // Whether every internal node of the tree is licensed by a production.
  bool Derives(const LosrNode &tree) const;

  void Save(std::ostream &out) const;
  static Grammar Load(std::istream &in);

 private:
  void Index();

  std::set<Production> productions_;
  std::map<Symbol, std::vector<const Production *>> by_last_;
};

// Elliptical node insertion rules keyed by the chunk features on either
// side of an omitted anaphor.
class EllipsisTable {
 public:
  using Key = std::pair<FeatureName, FeatureName>;

  static EllipsisTable Induce(const std::vector<TreebankRecord> &records);

  void Add(FeatureName before, FeatureName after);
  // Template entity for the pair, or nullptr.
  NodePtr Find(FeatureName before, FeatureName after) const;
  const std::map<Key, NodePtr> &rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }

  // One "before<TAB>after<TAB>template" line per rule.
  void Save(std::ostream &out) const;
  static EllipsisTable Load(std::istream &in);

 private:
  std::map<Key, NodePtr> rules_;
};

// The elliptical template (entity: (type: reference)).
NodePtr ReferenceTemplate();

}  // namespace rcparse

#endif  // RCPARSE_GRAMMAR_H_
