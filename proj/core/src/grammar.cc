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

#include "rcparse/grammar.h"

#include <istream>
#include <ostream>
#include <sstream>

#include "rcparse/errors.h"

namespace rcparse {
namespace {

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream stream{std::string(text)};
  for (std::string w; stream >> w;) words.push_back(w);
  return words;
}

// Feature leaf met in a pre-order walk, with its path from the root.
struct LeafVisit {
  std::vector<int> path;
  FeatureName chunk_feature;
};

void VisitLeaves(const LosrNode &node, std::vector<int> *path,
                 std::vector<LeafVisit> *out) {
  for (int i = 0; i < static_cast<int>(node.items().size()); ++i) {
    path->push_back(i);
    const Item &item = node.items()[i];
    if (const auto *f = std::get_if<Feature>(&item)) {
      if (f->name != FeatureName::kId && f->name != FeatureName::kReferenceId) {
        out->push_back({*path, f->ChunkFeature()});
      }
    } else {
      VisitLeaves(*std::get<NodePtr>(item), path, out);
    }
    path->pop_back();
  }
}

}  // namespace

Symbol Symbol::Of(const Item &item) {
  if (const auto *f = std::get_if<Feature>(&item)) return Of(f->name);
  return Of(std::get<NodePtr>(item)->label());
}

std::optional<Symbol> Symbol::Parse(std::string_view text) {
  if (auto f = ParseFeatureName(text)) return Of(*f);
  if (auto l = ParseLabel(text)) return Of(*l);
  return std::nullopt;
}

std::string Symbol::ToString() const {
  return is_feature ? FeatureNameString(feature) : LabelString(label);
}

std::string Production::ToString() const {
  std::string out = std::string(LabelString(lhs)) + " ->";
  for (const Symbol &s : rhs) out += " " + s.ToString();
  return out;
}

Production Production::Parse(std::string_view text) {
  std::vector<std::string> words = SplitWords(text);
  auto fail = [&] {
    return Error(ErrorCode::kParse, "malformed production '" + std::string(text) + "'");
  };
  if (words.size() < 3 || words[1] != "->") throw fail();
  auto lhs = ParseLabel(words[0]);
  if (!lhs) throw fail();
  Production p{*lhs, {}};
  for (size_t i = 2; i < words.size(); ++i) {
    auto s = Symbol::Parse(words[i]);
    if (!s) throw fail();
    p.rhs.push_back(*s);
  }
  return p;
}

Grammar Grammar::Induce(const std::vector<TreebankRecord> &records) {
  Grammar grammar;
  for (const TreebankRecord &r : records) grammar.Add(*StripIds(r.gold));
  return grammar;
}

void Grammar::Add(const LosrNode &tree) {
  Production p{tree.label(), {}};
  for (const Item &item : tree.items()) {
    p.rhs.push_back(Symbol::Of(item));
    if (const auto *child = std::get_if<NodePtr>(&item)) Add(**child);
  }
  Add(std::move(p));
}

void Grammar::Add(Production production) {
  if (production.rhs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "production with empty right-hand side");
  }
  if (productions_.insert(std::move(production)).second) Index();
}

void Grammar::Index() {
  by_last_.clear();
  for (const Production &p : productions_) by_last_[p.rhs.back()].push_back(&p);
}

const std::vector<const Production *> &Grammar::EndingWith(const Symbol &last) const {
  static const std::vector<const Production *> kNone;
  auto it = by_last_.find(last);
  return it == by_last_.end() ? kNone : it->second;
}

bool Grammar::Derives(const LosrNode &tree) const {
  Production p{tree.label(), {}};
  for (const Item &item : tree.items()) {
    p.rhs.push_back(Symbol::Of(item));
    if (const auto *child = std::get_if<NodePtr>(&item)) {
      if (!Derives(**child)) return false;
    }
  }
  return productions_.count(p) > 0;
}

void Grammar::Save(std::ostream &out) const {
  for (const Production &p : productions_) out << p.ToString() << '\n';
}

Grammar Grammar::Load(std::istream &in) {
  Grammar grammar;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) grammar.Add(Production::Parse(line));
  }
  return grammar;
}

NodePtr ReferenceTemplate() {
  static const NodePtr kTemplate =
      LosrNode::Make(Label::kEntity, {Feature{FeatureName::kType, "reference"}});
  return kTemplate;
}

EllipsisTable EllipsisTable::Induce(const std::vector<TreebankRecord> &records) {
  EllipsisTable table;
  for (const TreebankRecord &r : records) {
    std::vector<LeafVisit> leaves;
    std::vector<int> path;
    VisitLeaves(*r.gold, &path, &leaves);
    std::set<std::vector<int>> aligned;
    for (const AlignmentEntry &a : r.alignment) aligned.insert(a.path);
    for (size_t i = 0; i < leaves.size(); ++i) {
      if (leaves[i].chunk_feature != FeatureName::kReference ||
          aligned.count(leaves[i].path)) {
        continue;
      }
      std::optional<FeatureName> before, after;
      for (size_t j = i; j-- > 0;) {
        if (aligned.count(leaves[j].path)) {
          before = leaves[j].chunk_feature;
          break;
        }
      }
      for (size_t j = i + 1; j < leaves.size(); ++j) {
        if (aligned.count(leaves[j].path)) {
          after = leaves[j].chunk_feature;
          break;
        }
      }
      if (before && after) table.Add(*before, *after);
    }
  }
  return table;
}

void EllipsisTable::Add(FeatureName before, FeatureName after) {
  rules_[{before, after}] = ReferenceTemplate();
}

NodePtr EllipsisTable::Find(FeatureName before, FeatureName after) const {
  auto it = rules_.find({before, after});
  return it == rules_.end() ? nullptr : it->second;
}

void EllipsisTable::Save(std::ostream &out) const {
  for (const auto &[key, node] : rules_) {
    out << FeatureNameString(key.first) << '\t' << FeatureNameString(key.second)
        << '\t' << node->canonical() << '\n';
  }
}

EllipsisTable EllipsisTable::Load(std::istream &in) {
  EllipsisTable table;
  int line_number = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream stream(line);
    for (std::string field; std::getline(stream, field, '\t');) fields.push_back(field);
    if (fields.size() != 3) {
      throw Error(ErrorCode::kParse,
                  "malformed ellipsis line " + std::to_string(line_number), line_number);
    }
    auto before = ParseFeatureName(fields[0]);
    auto after = ParseFeatureName(fields[1]);
    NodePtr node = Deserialize(fields[2]);
    if (!before || !after || node->label() != Label::kEntity || !node->children().empty()) {
      throw Error(ErrorCode::kParse,
                  "malformed ellipsis line " + std::to_string(line_number), line_number);
    }
    table.rules_[{*before, *after}] = node;
  }
  return table;
}

}  // namespace rcparse
