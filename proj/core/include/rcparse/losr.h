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

#ifndef RCPARSE_LOSR_H_
#define RCPARSE_LOSR_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rcparse {

// Semantic features. The first seven are chunkable: the chunker may emit
// them as IOB2 tags. id and reference-id only come from annotation or
// anaphora resolution.
enum class FeatureName : std::uint8_t {
  kAction,
  kType,
  kColor,
  kIndicator,
  kRelation,
  kCardinal,
  kReference,
  kId,
  kReferenceId,
};
inline constexpr int kNumFeatureNames = 9;
inline constexpr int kNumChunkableFeatures = 7;

enum class Label : std::uint8_t {
  kSequence,
  kEvent,
  kEntity,
  kSpatialRelation,
  kDestination,
  kMeasure,
};
inline constexpr int kNumLabels = 6;

const char *FeatureNameString(FeatureName name);
std::optional<FeatureName> ParseFeatureName(std::string_view text);
const char *LabelString(Label label);
std::optional<Label> ParseLabel(std::string_view text);

bool IsChunkable(FeatureName name);
bool IsIntegerFeature(FeatureName name);

// The reference chunk tag ('it', 'one') is realized in trees as the leaf
// (type: reference); every other chunk feature names its own leaf.
FeatureName TreeFeatureForChunk(FeatureName chunk_feature);

// Symbolic values V(f). Empty for the integer-valued features.
const std::vector<std::string> &FeatureValues(FeatureName name);
bool IsValidValue(FeatureName name, std::string_view value);

struct Feature {
  FeatureName name;
  std::string value;

  int IntValue() const;
  // "(name: value)"
  std::string ToString() const;

  // Chunk feature of this leaf when it is realized by words.
  FeatureName ChunkFeature() const;

  friend bool operator==(const Feature &a, const Feature &b) = default;
};

// Builds a feature after checking value membership in V(name). Throws
// Error(kParse) for values outside the feature's domain.
Feature MakeFeature(FeatureName name, std::string value);

class LosrNode;
using NodePtr = std::shared_ptr<const LosrNode>;

// An item of a node body: a feature leaf or a child element. Items are kept
// in surface order.
using Item = std::variant<Feature, NodePtr>;

// Immutable LOSR element. The canonical single-line text is computed once at
// construction and doubles as the identity key of the node.
class LosrNode {
 public:
  LosrNode(Label label, std::vector<Item> items);

  static NodePtr Make(Label label, std::vector<Item> items) {
    return std::make_shared<const LosrNode>(label, std::move(items));
  }

  Label label() const { return label_; }
  const std::vector<Item> &items() const { return items_; }
  const std::string &canonical() const { return canonical_; }

  std::vector<Feature> features() const;
  const std::vector<NodePtr> &children() const { return children_; }
  const Feature *FindFeature(FeatureName name) const;
  int CountFeature(FeatureName name) const;
  bool HasFeature(FeatureName name, std::string_view value) const;

  // Entity whose type is the anaphoric placeholder 'reference'.
  bool IsReference() const;

 private:
  Label label_;
  std::vector<Item> items_;
  std::vector<NodePtr> children_;
  std::string canonical_;
};

// First violated structural rule, or nullopt when the tree is well formed.
std::optional<std::string> FindViolation(const LosrNode &node);
// Throws Error(kMalformedNode) naming the violated rule.
void CheckNode(const LosrNode &node);

std::string Serialize(const LosrNode &node, bool pretty = false);

// Parses canonical or pretty text. Throws Error(kParse) carrying the
// character offset, or Error(kMalformedNode) for structurally invalid trees.
NodePtr Deserialize(std::string_view text);

// Pre-order feature leaves, excluding id and reference-id.
std::vector<Feature> LeafValues(const LosrNode &node);

bool EqualsExact(const LosrNode &a, const LosrNode &b);

// Removes id and reference-id features everywhere in the tree.
NodePtr StripIds(const NodePtr &node);

// Pre-order list of the entity nodes of a tree.
std::vector<NodePtr> Entities(const NodePtr &root);

}  // namespace rcparse

#endif  // RCPARSE_LOSR_H_
