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

#include "rcparse/losr.h"

#include <array>
#include <charconv>

#include "rcparse/errors.h"

namespace rcparse {
namespace {

constexpr std::array<const char *, kNumFeatureNames> kFeatureNames = {
    "action",   "type",      "color", "indicator",   "relation",
    "cardinal", "reference", "id",    "reference-id"};

constexpr std::array<const char *, kNumLabels> kLabelNames = {
    "sequence", "event", "entity", "spatial-relation", "destination",
    "measure"};

bool IsWordChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
}

bool IsPositiveInteger(std::string_view text) {
  if (text.empty() || text.size() > 9 || text[0] == '0') return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

void AppendPretty(const LosrNode &node, int depth, std::string *out) {
  const std::string indent(2 * depth, ' ');
  out->append(indent).append("(").append(LabelString(node.label())).append(":");
  for (const Item &item : node.items()) {
    out->append("\n");
    if (const auto *f = std::get_if<Feature>(&item)) {
      out->append(2 * (depth + 1), ' ').append(f->ToString());
    } else {
      AppendPretty(*std::get<NodePtr>(item), depth + 1, out);
    }
  }
  out->append(")");
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  NodePtr ReadRoot() {
    Expect('(');
    SkipSpace();
    size_t name_pos = pos_;
    std::string name = ReadWord();
    auto label = ParseLabel(name);
    if (!label) Fail("unknown label '" + name + "'", name_pos);
    NodePtr node = ReadElementBody(*label);
    SkipSpace();
    if (pos_ != text_.size()) Fail("trailing characters", pos_);
    return node;
  }

 private:
  // Parses "': ' item+ ')'" after the label name.
  NodePtr ReadElementBody(Label label) {
    Expect(':');
    std::vector<Item> items;
    for (;;) {
      SkipSpace();
      if (pos_ >= text_.size()) Fail("unbalanced parentheses", pos_);
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      Expect('(');
      SkipSpace();
      size_t name_pos = pos_;
      std::string name = ReadWord();
      if (auto child = ParseLabel(name)) {
        items.emplace_back(ReadElementBody(*child));
        continue;
      }
      auto feature = ParseFeatureName(name);
      if (!feature) Fail("unknown feature or label '" + name + "'", name_pos);
      if (*feature == FeatureName::kReference) {
        Fail("'reference' is a chunk tag, not a tree feature", name_pos);
      }
      Expect(':');
      SkipSpace();
      size_t value_pos = pos_;
      std::string value = ReadWord();
      if (!IsValidValue(*feature, value)) {
        Fail("value '" + value + "' not in V(" + name + ")", value_pos);
      }
      Expect(')');
      items.emplace_back(Feature{*feature, std::move(value)});
    }
    if (items.empty()) Fail("empty element body", pos_);
    return LosrNode::Make(label, std::move(items));
  }

  std::string ReadWord() {
    SkipSpace();
    size_t start = pos_;
    while (pos_ < text_.size() && IsWordChar(text_[pos_])) ++pos_;
    if (start == pos_) Fail("expected a name or value", start);
    return std::string(text_.substr(start, pos_ - start));
  }

  void Expect(char c) {
    SkipSpace();
    if (pos_ >= text_.size()) {
      Fail(c == ')' ? std::string("unbalanced parentheses")
                    : std::string("unexpected end of input"),
           pos_);
    }
    if (text_[pos_] != c) {
      Fail(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\n' || text_[pos_] == '\t' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  [[noreturn]] void Fail(const std::string &message, size_t offset) {
    throw Error(ErrorCode::kParse,
                "LOSR parse error at offset " + std::to_string(offset) + ": " +
                    message,
                static_cast<int>(offset));
  }

  std::string_view text_;
  size_t pos_ = 0;
};

std::optional<std::string> CheckElement(const LosrNode &node) {
  const std::string where = std::string(LabelString(node.label())) + ": ";
  std::vector<Feature> features = node.features();
  std::vector<NodePtr> children = node.children();
  auto count_children = [&](Label l) {
    int n = 0;
    for (const auto &c : children) n += c->label() == l;
    return n;
  };

  switch (node.label()) {
    case Label::kSequence:
      if (!features.empty()) return where + "sequence carries no features";
      if (children.size() < 2) return where + "sequence needs at least two events";
      if (count_children(Label::kEvent) != static_cast<int>(children.size())) {
        return where + "sequence children must be events";
      }
      break;
    case Label::kEvent:
      if (features.size() != 1 || features[0].name != FeatureName::kAction) {
        return where + "event carries exactly one action feature";
      }
      for (const auto &c : children) {
        if (c->label() != Label::kEntity && c->label() != Label::kDestination) {
          return where + "event children must be entities or destinations";
        }
      }
      break;
    case Label::kEntity:
      if (features.empty()) return where + "entity carries at least one feature";
      if (node.CountFeature(FeatureName::kType) > 1) {
        return where + "entity carries at most one type feature";
      }
      if (node.CountFeature(FeatureName::kId) > 1 ||
          node.CountFeature(FeatureName::kReferenceId) > 1) {
        return where + "entity carries at most one id and one reference-id";
      }
      for (const auto &f : features) {
        if (f.name != FeatureName::kType && f.name != FeatureName::kColor &&
            f.name != FeatureName::kIndicator && f.name != FeatureName::kId &&
            f.name != FeatureName::kReferenceId) {
          return where + "feature '" + FeatureNameString(f.name) +
                 "' not allowed on entity";
        }
      }
      if (count_children(Label::kSpatialRelation) !=
          static_cast<int>(children.size())) {
        return where + "entity children must be spatial relations";
      }
      break;
    case Label::kSpatialRelation:
      if (features.size() != 1 || features[0].name != FeatureName::kRelation) {
        return where + "spatial-relation carries exactly one relation feature";
      }
      if (count_children(Label::kMeasure) > 1 ||
          count_children(Label::kEntity) > 1 ||
          count_children(Label::kMeasure) + count_children(Label::kEntity) !=
              static_cast<int>(children.size())) {
        return where +
               "spatial-relation children are at most one measure and one "
               "entity";
      }
      break;
    case Label::kDestination:
      if (!features.empty()) return where + "destination carries no features";
      if (children.size() != 1 ||
          children[0]->label() != Label::kSpatialRelation) {
        return where + "destination has exactly one spatial-relation child";
      }
      break;
    case Label::kMeasure:
      if (!children.empty()) return where + "measure has no children";
      if (features.size() != 2 || node.CountFeature(FeatureName::kCardinal) != 1 ||
          node.CountFeature(FeatureName::kType) != 1) {
        return where + "measure carries one cardinal and one type feature";
      }
      break;
  }
  for (const auto &f : features) {
    if (f.name == FeatureName::kReference) {
      return where + "'reference' is not a tree feature";
    }
    if (!IsValidValue(f.name, f.value)) {
      return where + "value '" + f.value + "' not in V(" +
             FeatureNameString(f.name) + ")";
    }
  }
  for (const auto &c : children) {
    if (auto v = CheckElement(*c)) return v;
  }
  return std::nullopt;
}

void CollectLeaves(const LosrNode &node, std::vector<Feature> *out) {
  for (const Item &item : node.items()) {
    if (const auto *f = std::get_if<Feature>(&item)) {
      if (f->name != FeatureName::kId && f->name != FeatureName::kReferenceId) {
        out->push_back(*f);
      }
    } else {
      CollectLeaves(*std::get<NodePtr>(item), out);
    }
  }
}

void CollectEntities(const NodePtr &node, std::vector<NodePtr> *out) {
  if (node->label() == Label::kEntity) out->push_back(node);
  for (const Item &item : node->items()) {
    if (const auto *c = std::get_if<NodePtr>(&item)) CollectEntities(*c, out);
  }
}

}  // namespace

const char *FeatureNameString(FeatureName name) {
  return kFeatureNames[static_cast<int>(name)];
}

std::optional<FeatureName> ParseFeatureName(std::string_view text) {
  for (int i = 0; i < kNumFeatureNames; ++i) {
    if (text == kFeatureNames[i]) return static_cast<FeatureName>(i);
  }
  return std::nullopt;
}

const char *LabelString(Label label) {
  return kLabelNames[static_cast<int>(label)];
}

std::optional<Label> ParseLabel(std::string_view text) {
  for (int i = 0; i < kNumLabels; ++i) {
    if (text == kLabelNames[i]) return static_cast<Label>(i);
  }
  return std::nullopt;
}

bool IsChunkable(FeatureName name) {
  return static_cast<int>(name) < kNumChunkableFeatures;
}

bool IsIntegerFeature(FeatureName name) {
  return name == FeatureName::kCardinal || name == FeatureName::kId ||
         name == FeatureName::kReferenceId;
}

FeatureName TreeFeatureForChunk(FeatureName chunk_feature) {
  return chunk_feature == FeatureName::kReference ? FeatureName::kType
                                                  : chunk_feature;
}

const std::vector<std::string> &FeatureValues(FeatureName name) {
  static const std::vector<std::string> kAction = {"take", "drop", "move"};
  static const std::vector<std::string> kType = {
      "cube", "prism",  "stack",  "tile",     "corner",
      "edge", "board", "region", "reference"};
  static const std::vector<std::string> kColor = {
      "red", "green", "blue", "cyan", "yellow", "magenta", "white", "gray"};
  static const std::vector<std::string> kIndicator = {"left", "right", "front",
                                                      "back", "top"};
  static const std::vector<std::string> kRelation = {
      "above",  "below",    "left",   "right",  "front",
      "behind", "adjacent", "within", "nearest"};
  static const std::vector<std::string> kReference = {"reference"};
  static const std::vector<std::string> kNone;
  switch (name) {
    case FeatureName::kAction: return kAction;
    case FeatureName::kType: return kType;
    case FeatureName::kColor: return kColor;
    case FeatureName::kIndicator: return kIndicator;
    case FeatureName::kRelation: return kRelation;
    case FeatureName::kReference: return kReference;
    case FeatureName::kCardinal:
    case FeatureName::kId:
    case FeatureName::kReferenceId: return kNone;
  }
  return kNone;
}

bool IsValidValue(FeatureName name, std::string_view value) {
  if (IsIntegerFeature(name)) return IsPositiveInteger(value);
  for (const auto &v : FeatureValues(name)) {
    if (v == value) return true;
  }
  return false;
}

int Feature::IntValue() const {
  int result = 0;
  std::from_chars(value.data(), value.data() + value.size(), result);
  return result;
}

std::string Feature::ToString() const {
  return std::string("(") + FeatureNameString(name) + ": " + value + ")";
}

FeatureName Feature::ChunkFeature() const {
  if (name == FeatureName::kType && value == "reference") {
    return FeatureName::kReference;
  }
  return name;
}

Feature MakeFeature(FeatureName name, std::string value) {
  if (!IsValidValue(name, value)) {
    throw Error(ErrorCode::kParse, "value '" + value + "' not in V(" +
                                       FeatureNameString(name) + ")");
  }
  return Feature{name, std::move(value)};
}

LosrNode::LosrNode(Label label, std::vector<Item> items)
    : label_(label), items_(std::move(items)) {
  canonical_.reserve(32);
  canonical_.append("(").append(LabelString(label_)).append(":");
  for (const Item &item : items_) {
    canonical_.push_back(' ');
    if (const auto *f = std::get_if<Feature>(&item)) {
      canonical_.append("(").append(FeatureNameString(f->name)).append(": ");
      canonical_.append(f->value).append(")");
    } else {
      children_.push_back(std::get<NodePtr>(item));
      canonical_.append(children_.back()->canonical());
    }
  }
  canonical_.push_back(')');
}

std::vector<Feature> LosrNode::features() const {
  std::vector<Feature> result;
  for (const Item &item : items_) {
    if (const auto *f = std::get_if<Feature>(&item)) result.push_back(*f);
  }
  return result;
}

const Feature *LosrNode::FindFeature(FeatureName name) const {
  for (const Item &item : items_) {
    if (const auto *f = std::get_if<Feature>(&item)) {
      if (f->name == name) return f;
    }
  }
  return nullptr;
}

int LosrNode::CountFeature(FeatureName name) const {
  int n = 0;
  for (const Item &item : items_) {
    if (const auto *f = std::get_if<Feature>(&item)) n += f->name == name;
  }
  return n;
}

bool LosrNode::HasFeature(FeatureName name, std::string_view value) const {
  for (const Item &item : items_) {
    if (const auto *f = std::get_if<Feature>(&item)) {
      if (f->name == name && f->value == value) return true;
    }
  }
  return false;
}

bool LosrNode::IsReference() const {
  return label_ == Label::kEntity && HasFeature(FeatureName::kType, "reference");
}

std::optional<std::string> FindViolation(const LosrNode &node) {
  return CheckElement(node);
}

void CheckNode(const LosrNode &node) {
  if (auto violation = FindViolation(node)) {
    throw Error(ErrorCode::kMalformedNode, "malformed node: " + *violation);
  }
}

std::string Serialize(const LosrNode &node, bool pretty) {
  CheckNode(node);
  if (!pretty) return node.canonical();
  std::string out;
  AppendPretty(node, 0, &out);
  return out;
}

NodePtr Deserialize(std::string_view text) {
  NodePtr node = Reader(text).ReadRoot();
  CheckNode(*node);
  return node;
}

std::vector<Feature> LeafValues(const LosrNode &node) {
  std::vector<Feature> out;
  CollectLeaves(node, &out);
  return out;
}

bool EqualsExact(const LosrNode &a, const LosrNode &b) {
  return a.canonical() == b.canonical();
}

NodePtr StripIds(const NodePtr &node) {
  std::vector<Item> items;
  bool changed = false;
  for (const Item &item : node->items()) {
    if (const auto *f = std::get_if<Feature>(&item)) {
      if (f->name == FeatureName::kId || f->name == FeatureName::kReferenceId) {
        changed = true;
        continue;
      }
      items.push_back(*f);
    } else {
      NodePtr child = StripIds(std::get<NodePtr>(item));
      changed |= child != std::get<NodePtr>(item);
      items.emplace_back(std::move(child));
    }
  }
  if (!changed) return node;
  return LosrNode::Make(node->label(), std::move(items));
}

std::vector<NodePtr> Entities(const NodePtr &root) {
  std::vector<NodePtr> out;
  CollectEntities(root, &out);
  return out;
}

}  // namespace rcparse
