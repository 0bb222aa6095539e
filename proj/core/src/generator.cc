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

#include "rcparse/generator.h"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "rcparse/errors.h"
#include "rcparse/pipeline.h"
#include "rcparse/planner.h"
#include "rcparse/postprocess.h"

namespace rcparse {
namespace {

// Draws are reduced with a plain modulo so that a seed yields the same
// corpus with every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  int Below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  bool Chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

  template <typename T>
  const T &Pick(const std::vector<T> &values) {
    return values[Below(static_cast<int>(values.size()))];
  }

  // Index drawn with probability proportional to its weight; -1 when all
  // weights are zero.
  int Weighted(const std::vector<int> &weights) {
    int total = 0;
    for (int w : weights) total += w;
    if (total <= 0) return -1;
    int r = Below(total);
    for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
      if (r < weights[i]) return i;
      r -= weights[i];
    }
    return -1;
  }

  // Indices ordered by repeated weighted draws without replacement.
  std::vector<int> WeightedOrder(std::vector<int> weights) {
    std::vector<int> order;
    for (int i; (i = Weighted(weights)) >= 0;) {
      order.push_back(i);
      weights[i] = 0;
    }
    return order;
  }

  template <typename T>
  void Shuffle(std::vector<T> *values) {
    for (int i = static_cast<int>(values->size()) - 1; i > 0; --i) {
      std::swap((*values)[i], (*values)[Below(i + 1)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// An element under construction: features with their surface words (empty
// for unaligned leaves), filler words outside any chunk, and children.
struct GenNode;
using GenNodePtr = std::shared_ptr<GenNode>;

struct GenItem {
  enum class Kind { kFiller, kLeaf, kNode };
  Kind kind = Kind::kFiller;
  std::string words;
  Feature feature;
  GenNodePtr node;
};

struct GenNode {
  Label label;
  std::vector<GenItem> items;
};

GenItem Filler(std::string words) { return {GenItem::Kind::kFiller, std::move(words), {}, {}}; }

GenItem Leaf(FeatureName name, std::string value, std::string words) {
  return {GenItem::Kind::kLeaf, std::move(words), MakeFeature(name, std::move(value)), {}};
}

GenItem Sub(GenNodePtr node) { return {GenItem::Kind::kNode, "", {}, std::move(node)}; }

GenNodePtr Gen(Label label, std::vector<GenItem> items) {
  return std::make_shared<GenNode>(GenNode{label, std::move(items)});
}

std::vector<std::string> SplitWords(const std::string &words) {
  std::vector<std::string> out;
  std::istringstream stream(words);
  for (std::string w; stream >> w;) out.push_back(w);
  return out;
}

NodePtr Render(const GenNode &node, std::vector<int> *path,
               std::vector<std::string> *tokens, std::vector<AlignmentEntry> *alignment) {
  std::vector<Item> items;
  for (const GenItem &item : node.items) {
    switch (item.kind) {
      case GenItem::Kind::kFiller:
        for (auto &w : SplitWords(item.words)) tokens->push_back(w);
        break;
      case GenItem::Kind::kLeaf: {
        path->push_back(static_cast<int>(items.size()));
        if (!item.words.empty()) {
          const int start = static_cast<int>(tokens->size());
          for (auto &w : SplitWords(item.words)) tokens->push_back(w);
          alignment->push_back({*path, start, static_cast<int>(tokens->size())});
        }
        path->pop_back();
        items.emplace_back(item.feature);
        break;
      }
      case GenItem::Kind::kNode:
        path->push_back(static_cast<int>(items.size()));
        items.emplace_back(Render(*item.node, path, tokens, alignment));
        path->pop_back();
        break;
    }
  }
  return LosrNode::Make(node.label, std::move(items));
}

NodePtr ToLosr(const GenNode &node) {
  std::vector<int> path;
  std::vector<std::string> tokens;
  std::vector<AlignmentEntry> alignment;
  return Render(node, &path, &tokens, &alignment);
}

struct Surface {
  const char *words;
  int weight;
};

using SurfaceTable = std::map<std::pair<FeatureName, std::string>, std::vector<Surface>>;

const SurfaceTable &Surfaces() {
  using F = FeatureName;
  static const SurfaceTable kTable = {
      {{F::kAction, "take"}, {{"pick up", 6}, {"take", 2}, {"grab", 1}, {"lift", 1}}},
      {{F::kAction, "move"}, {{"move", 6}, {"shift", 1}, {"put", 2}, {"place", 1}}},
      {{F::kAction, "drop"}, {{"put", 3}, {"place", 3}, {"drop", 2}}},
      {{F::kType, "cube"}, {{"cube", 5}, {"block", 3}, {"box", 1}}},
      {{F::kType, "prism"}, {{"prism", 4}, {"pyramid", 2}}},
      {{F::kType, "stack"}, {{"stack", 3}, {"tower", 1}}},
      {{F::kType, "corner"}, {{"corner", 1}}},
      {{F::kType, "tile"}, {{"square", 3}, {"space", 1}, {"place", 1}, {"tile", 1}}},
      {{F::kColor, "red"}, {{"red", 1}}},
      {{F::kColor, "green"}, {{"green", 1}}},
      {{F::kColor, "blue"}, {{"blue", 1}}},
      {{F::kColor, "cyan"}, {{"light blue", 3}, {"cyan", 2}}},
      {{F::kColor, "yellow"}, {{"yellow", 1}}},
      {{F::kColor, "magenta"}, {{"purple", 2}, {"magenta", 1}, {"pink", 1}}},
      {{F::kColor, "white"}, {{"white", 1}}},
      {{F::kColor, "gray"}, {{"gray", 2}, {"grey", 1}}},
      {{F::kIndicator, "left"}, {{"left", 2}, {"leftmost", 2}}},
      {{F::kIndicator, "right"}, {{"right", 2}, {"rightmost", 2}}},
      {{F::kIndicator, "front"}, {{"front", 1}, {"frontmost", 1}}},
      {{F::kIndicator, "back"}, {{"back", 2}, {"backmost", 1}}},
      {{F::kIndicator, "top"}, {{"top", 2}, {"topmost", 1}}},
      {{F::kRelation, "above"},
       {{"on", 5}, {"on top of", 3}, {"onto", 1}, {"above", 1}, {"standing on top of", 1},
        {"sitting on", 1}}},
      {{F::kRelation, "below"}, {{"below", 2}, {"under", 2}, {"beneath", 1}}},
      {{F::kRelation, "left"}, {{"left of", 3}, {"to the left of", 2}}},
      {{F::kRelation, "right"}, {{"right of", 3}, {"to the right of", 2}}},
      {{F::kRelation, "front"}, {{"in front of", 1}}},
      {{F::kRelation, "behind"}, {{"behind", 1}}},
      {{F::kRelation, "adjacent"}, {{"next to", 3}, {"beside", 2}, {"adjacent to", 1}}},
      {{F::kRelation, "within"}, {{"in", 1}}},
      {{F::kCardinal, "1"}, {{"one", 1}}},
      {{F::kCardinal, "2"}, {{"two", 1}}},
      {{F::kCardinal, "3"}, {{"three", 1}}},
  };
  return kTable;
}

const std::vector<std::string> kColors = {"red",    "green",   "blue",  "cyan",
                                          "yellow", "magenta", "white", "gray"};
const std::vector<std::string> kModifierRelations = {"above", "below", "left", "right",
                                                     "front", "behind", "adjacent"};
const std::vector<std::string> kDirections = {"left", "right", "front", "behind"};

std::string PluralTile(const std::string &singular) { return singular + "s"; }

std::vector<Grounding> GroundLeniently(const GenNode &entity, const WorldModel &world) {
  try {
    return Ground(*ToLosr(entity), world, nullptr);
  } catch (const Error &) {
    return {};
  }
}

struct DestinationChoice {
  GenNodePtr destination;
  Cell target;
};

enum class DestinationStyle { kOn, kCorner, kMeasure };

class Generator {
 public:
  Generator(std::uint64_t seed, const GeneratorProfile &profile)
      : rng_(seed), profile_(profile) {}

  TreebankRecord Candidate(int id);

 private:
  std::string Say(FeatureName name, const std::string &value);
  std::string SayTile(int count);
  std::vector<GenItem> Determiner();
  WorldModel SampleScene();

  std::optional<GenNodePtr> Describe(const WorldModel &world, const Grounding &target,
                                     int depth, bool allow_relation);
  std::optional<GenNodePtr> DescribeStack(const WorldModel &world, const Grounding &target);
  std::optional<GenNodePtr> TryRelation(const WorldModel &world, const Shape &target,
                                        int depth);
  std::optional<DestinationChoice> Destination(const WorldModel &world,
                                               std::optional<Cell> source,
                                               DestinationStyle style);
  GenNodePtr CornerEntity(Cell corner);

  std::optional<TreebankRecord> Attempt(const WorldModel &world, int template_index);
  std::optional<TreebankRecord> FigureOne(const WorldModel &world);
  std::vector<Shape> Liftable(const WorldModel &world, std::optional<ShapeType> type);
  DestinationStyle PickStyle(bool allow_measure);

  Rng rng_;
  GeneratorProfile profile_;
};

std::string Generator::Say(FeatureName name, const std::string &value) {
  if (name == FeatureName::kColor && value == "cyan" && rng_.Chance(profile_.blue_for_cyan)) {
    return "blue";
  }
  const auto &surfaces = Surfaces().at({name, value});
  std::vector<int> weights;
  for (const Surface &s : surfaces) weights.push_back(s.weight);
  return surfaces[rng_.Weighted(weights)].words;
}

std::string Generator::SayTile(int count) {
  std::string singular = Say(FeatureName::kType, "tile");
  return count == 1 ? singular : PluralTile(singular);
}

std::vector<GenItem> Generator::Determiner() {
  if (rng_.Chance(0.9)) return {Filler("the")};
  return {};
}

WorldModel Generator::SampleScene() {
  const int n = WorldModel::kDefaultBoardSize;
  for (;;) {
    const int count =
        profile_.min_shapes + rng_.Below(profile_.max_shapes - profile_.min_shapes + 1);
    std::map<Cell, std::vector<Shape>> columns;
    int placed = 0;
    for (int tries = 0; placed < count && tries < count * 20; ++tries) {
      Cell cell{rng_.Below(n), rng_.Below(n)};
      auto &column = columns[cell];
      if (column.size() >= 3 || (!column.empty() && column.back().type == ShapeType::kPrism)) {
        continue;
      }
      // Favor stacks by retrying empty cells once.
      if (column.empty() && rng_.Chance(0.25) && !columns.empty()) {
        columns.erase(cell);
        continue;
      }
      Shape s;
      s.type = rng_.Chance(0.35) ? ShapeType::kPrism : ShapeType::kCube;
      s.color = rng_.Pick(kColors);
      s.x = cell.x;
      s.y = cell.y;
      s.z = static_cast<int>(column.size());
      column.push_back(s);
      ++placed;
    }
    std::vector<Shape> shapes;
    for (auto &[cell, column] : columns) {
      for (auto &s : column) shapes.push_back(s);
    }
    WorldModel world(n, std::move(shapes));
    if (Validate(world).empty() && !world.shapes().empty()) return world;
  }
}

std::vector<Shape> Generator::Liftable(const WorldModel &world,
                                       std::optional<ShapeType> type) {
  std::vector<Shape> out;
  for (const Cell &c : world.OccupiedCells()) {
    const Shape *top = world.Top(c);
    if (!type || top->type == *type) out.push_back(*top);
  }
  return out;
}

std::optional<GenNodePtr> Generator::DescribeStack(const WorldModel &world,
                                                   const Grounding &target) {
  std::vector<std::string> colors;
  for (const Shape &s : target.shapes) {
    if (std::find(colors.begin(), colors.end(), s.color) == colors.end()) {
      colors.push_back(s.color);
    }
  }
  std::vector<std::vector<std::string>> options;
  for (size_t i = 0; i < colors.size(); ++i) {
    options.push_back({colors[i]});
    for (size_t j = i + 1; j < colors.size(); ++j) options.push_back({colors[i], colors[j]});
  }
  rng_.Shuffle(&options);
  for (const auto &choice : options) {
    std::vector<GenItem> items = Determiner();
    for (size_t i = 0; i < choice.size(); ++i) {
      if (i > 0) items.push_back(Filler("and"));
      items.push_back(Leaf(FeatureName::kColor, choice[i], Say(FeatureName::kColor, choice[i])));
    }
    items.push_back(Leaf(FeatureName::kType, "stack", Say(FeatureName::kType, "stack")));
    GenNodePtr node = Gen(Label::kEntity, std::move(items));
    if (GroundLeniently(*node, world) == std::vector<Grounding>{target}) return node;
  }
  return std::nullopt;
}

std::optional<GenNodePtr> Generator::TryRelation(const WorldModel &world, const Shape &target,
                                                 int depth) {
  const Grounding self = Grounding::OfShape(target);
  std::vector<Grounding> landmarks;
  for (const Shape &s : world.shapes()) {
    if (!(s == target)) landmarks.push_back(Grounding::OfShape(s));
  }
  rng_.Shuffle(&landmarks);
  int tries = 0;
  for (const Grounding &landmark : landmarks) {
    if (++tries > 6) break;
    std::vector<std::string> relations;
    for (const auto &r : kModifierRelations) {
      if (RelationHolds(r, std::nullopt, self, landmark)) relations.push_back(r);
    }
    if (relations.empty()) continue;
    const std::string relation = rng_.Pick(relations);
    auto inner = Describe(world, landmark, depth - 1, depth - 1 > 0);
    if (!inner) continue;
    std::vector<GenItem> items = Determiner();
    items.push_back(Leaf(FeatureName::kColor, target.color, Say(FeatureName::kColor, target.color)));
    const std::string type = ShapeTypeString(target.type);
    items.push_back(Leaf(FeatureName::kType, type, Say(FeatureName::kType, type)));
    items.push_back(Sub(Gen(Label::kSpatialRelation,
                            {Leaf(FeatureName::kRelation, relation,
                                  Say(FeatureName::kRelation, relation)),
                             Sub(*inner)})));
    GenNodePtr node = Gen(Label::kEntity, std::move(items));
    if (GroundLeniently(*node, world) == std::vector<Grounding>{self}) return node;
  }
  return std::nullopt;
}

std::optional<GenNodePtr> Generator::Describe(const WorldModel &world, const Grounding &target,
                                              int depth, bool allow_relation) {
  if (target.kind == GroundingKind::kStack) return DescribeStack(world, target);
  const Shape &shape = target.shapes[0];
  const std::string type = ShapeTypeString(shape.type);
  const std::vector<Grounding> wanted = {target};
  std::vector<int> weights = {profile_.bare_type, profile_.color_type, profile_.indicator,
                              allow_relation && depth > 0 ? profile_.relation : 0};
  for (int style : rng_.WeightedOrder(weights)) {
    if (style == 3) {
      if (auto node = TryRelation(world, shape, depth)) return node;
      continue;
    }
    std::vector<std::string> indicators = {""};
    if (style == 2) {
      indicators = {"left", "right", "front", "back", "top"};
      rng_.Shuffle(&indicators);
    }
    for (const std::string &indicator : indicators) {
      std::vector<GenItem> items = Determiner();
      if (!indicator.empty()) {
        items.push_back(
            Leaf(FeatureName::kIndicator, indicator, Say(FeatureName::kIndicator, indicator)));
      }
      if (style >= 1) {
        items.push_back(Leaf(FeatureName::kColor, shape.color, Say(FeatureName::kColor, shape.color)));
      }
      items.push_back(Leaf(FeatureName::kType, type, Say(FeatureName::kType, type)));
      GenNodePtr node = Gen(Label::kEntity, std::move(items));
      if (GroundLeniently(*node, world) == wanted) return node;
    }
  }
  return std::nullopt;
}

GenNodePtr Generator::CornerEntity(Cell corner) {
  std::vector<GenItem> items = {Filler("the")};
  const std::string depth = corner.y == 0 ? "front" : "back";
  const std::string side = corner.x == 0 ? "left" : "right";
  items.push_back(Leaf(FeatureName::kIndicator, depth, depth));
  items.push_back(Leaf(FeatureName::kIndicator, side, side));
  items.push_back(Leaf(FeatureName::kType, "corner", "corner"));
  return Gen(Label::kEntity, std::move(items));
}

DestinationStyle Generator::PickStyle(bool allow_measure) {
  const int r = rng_.Weighted({6, 2, allow_measure ? 3 : 0});
  return r == 0 ? DestinationStyle::kOn
                : (r == 1 ? DestinationStyle::kCorner : DestinationStyle::kMeasure);
}

std::optional<DestinationChoice> Generator::Destination(const WorldModel &world,
                                                        std::optional<Cell> source,
                                                        DestinationStyle style) {
  const int n = world.board_size();
  auto usable = [&](Cell c) {
    return world.InBounds(c) && AdmitsPlacement(world, c) && (!source || c != *source);
  };
  switch (style) {
    case DestinationStyle::kOn: {
      std::vector<Cell> cells;
      for (const Cell &c : world.OccupiedCells()) {
        if (usable(c)) cells.push_back(c);
      }
      rng_.Shuffle(&cells);
      for (size_t i = 0; i < cells.size() && i < 4; ++i) {
        const Cell c = cells[i];
        auto column = world.Column(c);
        Grounding landmark = column.size() >= 2 && rng_.Chance(0.35)
                                 ? Grounding::OfStack({column.begin(), column.end()})
                                 : Grounding::OfShape(column.back());
        auto entity = Describe(world, landmark, profile_.max_relation_depth, true);
        if (!entity) continue;
        auto relation = Gen(Label::kSpatialRelation,
                            {Leaf(FeatureName::kRelation, "above",
                                  Say(FeatureName::kRelation, "above")),
                             Sub(*entity)});
        return DestinationChoice{Gen(Label::kDestination, {Sub(relation)}), c};
      }
      return std::nullopt;
    }
    case DestinationStyle::kCorner: {
      std::vector<Cell> corners = {{0, 0}, {n - 1, 0}, {0, n - 1}, {n - 1, n - 1}};
      rng_.Shuffle(&corners);
      for (const Cell &c : corners) {
        if (!usable(c)) continue;
        auto relation = Gen(Label::kSpatialRelation,
                            {Leaf(FeatureName::kRelation, "within", "in"),
                             Sub(CornerEntity(c))});
        return DestinationChoice{Gen(Label::kDestination, {Sub(relation)}), c};
      }
      return std::nullopt;
    }
    case DestinationStyle::kMeasure: {
      std::vector<Shape> shapes = world.shapes();
      rng_.Shuffle(&shapes);
      for (size_t i = 0; i < shapes.size() && i < 6; ++i) {
        const Shape &landmark = shapes[i];
        const int count = 1 + rng_.Below(3);
        const std::string direction = rng_.Pick(kDirections);
        Cell target = landmark.cell();
        if (direction == "left") target.x -= count;
        if (direction == "right") target.x += count;
        if (direction == "front") target.y -= count;
        if (direction == "behind") target.y += count;
        if (!usable(target)) continue;
        auto entity = Describe(world, Grounding::OfShape(landmark), 0, false);
        if (!entity) continue;
        const std::string cardinal = std::to_string(count);
        auto measure = Gen(Label::kMeasure,
                           {Leaf(FeatureName::kCardinal, cardinal,
                                 Say(FeatureName::kCardinal, cardinal)),
                            Leaf(FeatureName::kType, "tile", SayTile(count))});
        auto relation = Gen(Label::kSpatialRelation,
                            {Sub(measure),
                             Leaf(FeatureName::kRelation, direction,
                                  Say(FeatureName::kRelation, direction)),
                             Sub(*entity)});
        return DestinationChoice{Gen(Label::kDestination, {Sub(relation)}), target};
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// Adds (id: 1) in front of an entity under construction.
GenNodePtr WithId(const GenNodePtr &entity, int id) {
  auto copy = std::make_shared<GenNode>(*entity);
  auto first_leaf = std::find_if(copy->items.begin(), copy->items.end(), [](const GenItem &i) {
    return i.kind != GenItem::Kind::kFiller;
  });
  copy->items.insert(first_leaf, Leaf(FeatureName::kId, std::to_string(id), ""));
  return copy;
}

GenNodePtr Anaphor(const std::string &words, int id, std::vector<GenItem> before = {}) {
  std::vector<GenItem> items = std::move(before);
  items.push_back(Leaf(FeatureName::kType, "reference", words));
  items.push_back(Leaf(FeatureName::kReferenceId, std::to_string(id), ""));
  return Gen(Label::kEntity, std::move(items));
}

GenNodePtr Event(const std::string &action, const std::string &verb, GenNodePtr theme,
                 GenNodePtr destination = nullptr) {
  std::vector<GenItem> items = {Leaf(FeatureName::kAction, action, verb), Sub(theme)};
  if (destination) items.push_back(Sub(destination));
  return Gen(Label::kEvent, std::move(items));
}

std::optional<TreebankRecord> Generator::Attempt(const WorldModel &world, int template_index) {
  GenNodePtr root;
  WorldModel expected = world;
  const int depth = profile_.max_relation_depth;
  switch (template_index) {
    case 0: {  // take
      auto shapes = Liftable(world, std::nullopt);
      const Shape s = rng_.Pick(shapes);
      auto theme = Describe(world, Grounding::OfShape(s), depth, true);
      if (!theme) return std::nullopt;
      root = Event("take", Say(FeatureName::kAction, "take"), *theme);
      expected = PickUp(world, s.cell());
      break;
    }
    case 1:    // move on / into a corner
    case 4: {  // move by a measured offset
      auto shapes = Liftable(world, std::nullopt);
      const Shape s = rng_.Pick(shapes);
      auto theme = Describe(world, Grounding::OfShape(s), depth, true);
      if (!theme) return std::nullopt;
      WorldModel lifted = PickUp(world, s.cell());
      auto style = template_index == 4 ? DestinationStyle::kMeasure : PickStyle(false);
      auto destination = Destination(lifted, s.cell(), style);
      if (!destination) return std::nullopt;
      root = Event("move", Say(FeatureName::kAction, "move"), *theme,
                   destination->destination);
      expected = PlaceAt(lifted, destination->target);
      break;
    }
    case 2:    // pick up X and put it ...
    case 3: {  // pick up X and place ... (elliptical it)
      auto shapes = Liftable(world, std::nullopt);
      const Shape s = rng_.Pick(shapes);
      auto theme = Describe(world, Grounding::OfShape(s), depth, true);
      if (!theme) return std::nullopt;
      WorldModel lifted = PickUp(world, s.cell());
      auto destination = Destination(lifted, std::nullopt, PickStyle(true));
      if (!destination) return std::nullopt;
      GenNodePtr anaphor = template_index == 2 ? Anaphor("it", 1) : Anaphor("", 1);
      auto take = Event("take", Say(FeatureName::kAction, "take"), WithId(*theme, 1));
      auto drop = Event("drop", Say(FeatureName::kAction, "drop"), anaphor,
                        destination->destination);
      root = Gen(Label::kSequence, {Sub(take), Filler("and"), Sub(drop)});
      expected = PlaceAt(lifted, destination->target);
      break;
    }
    case 5: {  // move the red cube on the yellow one
      auto shapes = Liftable(world, ShapeType::kCube);
      if (shapes.empty()) return std::nullopt;
      const Shape s = rng_.Pick(shapes);
      auto theme = Describe(world, Grounding::OfShape(s), 0, false);
      if (!theme) return std::nullopt;
      WorldModel lifted = PickUp(world, s.cell());
      std::vector<Shape> landmarks;
      for (const Shape &top : Liftable(lifted, ShapeType::kCube)) {
        if (top.cell() != s.cell()) landmarks.push_back(top);
      }
      if (landmarks.empty()) return std::nullopt;
      const Shape landmark = rng_.Pick(landmarks);
      auto probe = Gen(Label::kEntity, {Leaf(FeatureName::kColor, landmark.color, "x"),
                                        Leaf(FeatureName::kType, "cube", "x")});
      if (GroundLeniently(*probe, lifted) !=
          std::vector<Grounding>{Grounding::OfShape(landmark)}) {
        return std::nullopt;
      }
      std::vector<GenItem> before = Determiner();
      before.push_back(Leaf(FeatureName::kColor, landmark.color,
                            Say(FeatureName::kColor, landmark.color)));
      auto relation = Gen(Label::kSpatialRelation,
                          {Leaf(FeatureName::kRelation, "above",
                                Say(FeatureName::kRelation, "above")),
                           Sub(Anaphor("one", 1, std::move(before)))});
      root = Event("move", Say(FeatureName::kAction, "move"), WithId(*theme, 1),
                   Gen(Label::kDestination, {Sub(relation)}));
      expected = PlaceAt(lifted, landmark.cell());
      break;
    }
    case 6:
      return FigureOne(world);
    default:
      return std::nullopt;
  }

  std::vector<int> path;
  TreebankRecord record;
  record.scene_before = world;
  record.scene_after = expected;
  record.gold = Render(*root, &path, &record.tokens, &record.alignment);
  return record;
}

// "pick up left purple prism and place on red cube one place in front of
// the one in the back right corner"
std::optional<TreebankRecord> Generator::FigureOne(const WorldModel &world) {
  const int n = world.board_size();
  auto prisms = Liftable(world, ShapeType::kPrism);
  if (prisms.empty()) return std::nullopt;
  const Shape s = rng_.Pick(prisms);
  std::optional<GenNodePtr> theme;
  std::vector<std::string> indicators = {"left", "right", "front", "back"};
  rng_.Shuffle(&indicators);
  for (const std::string &indicator : indicators) {
    auto node = Gen(Label::kEntity,
                    {Leaf(FeatureName::kIndicator, indicator,
                          Say(FeatureName::kIndicator, indicator)),
                     Leaf(FeatureName::kColor, s.color, Say(FeatureName::kColor, s.color)),
                     Leaf(FeatureName::kType, "prism", Say(FeatureName::kType, "prism"))});
    if (GroundLeniently(*node, world) == std::vector<Grounding>{Grounding::OfShape(s)}) {
      theme = node;
      break;
    }
  }
  if (!theme) return std::nullopt;
  WorldModel lifted = PickUp(world, s.cell());

  std::vector<Cell> corners = {{0, 0}, {n - 1, 0}, {0, n - 1}, {n - 1, n - 1}};
  rng_.Shuffle(&corners);
  for (const Cell &corner : corners) {
    auto column = lifted.Column(corner);
    if (column.empty()) continue;
    // The landmark shares the type of a shape standing in the corner.
    const ShapeType type = column[rng_.Below(static_cast<int>(column.size()))].type;
    std::vector<std::pair<std::string, Cell>> offsets;
    for (int count = 1; count <= 3; ++count) {
      offsets.push_back({"front", {corner.x, corner.y - count}});
      offsets.push_back({"behind", {corner.x, corner.y + count}});
      offsets.push_back({"left", {corner.x - count, corner.y}});
      offsets.push_back({"right", {corner.x + count, corner.y}});
    }
    rng_.Shuffle(&offsets);
    for (const auto &[direction, cell] : offsets) {
      if (!lifted.InBounds(cell) || !AdmitsPlacement(lifted, cell)) continue;
      const Shape *top = lifted.Top(cell);
      if (top == nullptr || top->type != type) continue;
      const int count = std::max(std::abs(cell.x - corner.x), std::abs(cell.y - corner.y));
      const std::string cardinal = std::to_string(count);
      const std::string type_name = ShapeTypeString(type);
      auto one = Anaphor("one", 2, {Filler("the")});
      one->items.push_back(Sub(Gen(Label::kSpatialRelation,
                                   {Leaf(FeatureName::kRelation, "within", "in"),
                                    Sub(CornerEntity(corner))})));
      auto measure = Gen(Label::kMeasure, {Leaf(FeatureName::kCardinal, cardinal,
                                                Say(FeatureName::kCardinal, cardinal)),
                                           Leaf(FeatureName::kType, "tile",
                                                count == 1 ? "place" : "places")});
      auto landmark = Gen(
          Label::kEntity,
          {Leaf(FeatureName::kId, "2", ""),
           Leaf(FeatureName::kColor, top->color, Say(FeatureName::kColor, top->color)),
           Leaf(FeatureName::kType, type_name, Say(FeatureName::kType, type_name)),
           Sub(Gen(Label::kSpatialRelation,
                   {Sub(measure),
                    Leaf(FeatureName::kRelation, direction,
                         Say(FeatureName::kRelation, direction)),
                    Sub(one)}))});
      auto destination = Gen(
          Label::kDestination,
          {Sub(Gen(Label::kSpatialRelation,
                   {Leaf(FeatureName::kRelation, "above", "on"), Sub(landmark)}))});
      auto take = Event("take", "pick up", WithId(*theme, 1));
      auto drop = Event("drop", "place", Anaphor("", 1), destination);
      auto root = Gen(Label::kSequence, {Sub(take), Filler("and"), Sub(drop)});
      std::vector<int> path;
      TreebankRecord record;
      record.scene_before = world;
      record.scene_after = PlaceAt(lifted, cell);
      record.gold = Render(*root, &path, &record.tokens, &record.alignment);
      return record;
    }
  }
  return std::nullopt;
}

// Whether anaphora resolution of the id-free tree restores the gold ids.
bool IdsConsistent(const NodePtr &gold) {
  try {
    return ResolveAnaphora(StripIds(gold))->canonical() == gold->canonical();
  } catch (const Error &) {
    return false;
  }
}

TreebankRecord Generator::Candidate(int id) {
  const std::vector<int> weights = {profile_.take,          profile_.move_on,
                                    profile_.take_put_it,   profile_.take_place_on,
                                    profile_.move_measure,  profile_.move_one,
                                    profile_.figure_one};
  for (;;) {
    WorldModel world = SampleScene();
    for (int tries = 0; tries < 8; ++tries) {
      const int template_index = rng_.Weighted(weights);
      std::optional<TreebankRecord> record;
      try {
        record = Attempt(world, template_index);
      } catch (const Error &) {
        continue;
      }
      if (!record) continue;
      record->id = id;
      try {
        CheckInclusion(*record);
      } catch (const Error &) {
        continue;
      }
      if (!IdsConsistent(record->gold)) continue;
      return *record;
    }
  }
}

bool Resolved(const TrainedModel &model, const TreebankRecord &record) {
  const std::vector<Chunk> chunks = GoldChunks(record);
  PipelineResult result = RunPipeline(model, record.tokens, record.scene_before, {}, &chunks);
  return result.ok() && !result.selection->tie &&
         result.chosen()->canonical() == record.gold->canonical();
}

GeneratorProfile BaseProfile(const std::string &name) {
  GeneratorProfile p;
  p.name = name;
  p.take = 3;
  p.move_on = 4;
  p.take_put_it = 3;
  p.take_place_on = 3;
  p.move_measure = 3;
  p.move_one = 2;
  p.figure_one = 2;
  p.bare_type = 1;
  p.color_type = 6;
  p.indicator = 2;
  p.relation = 2;
  return p;
}

}  // namespace

const std::vector<std::string> &GeneratorProfileNames() {
  static const std::vector<std::string> kNames = {"simple", "standard", "ambiguity",
                                                  "relation-heavy", "mixed"};
  return kNames;
}

GeneratorProfile GetGeneratorProfile(const std::string &name) {
  GeneratorProfile p = BaseProfile(name);
  if (name == "simple") {
    p = GeneratorProfile{};
    p.name = name;
    p.take = 1;
    p.color_type = 1;
    p.max_relation_depth = 0;
  } else if (name == "standard") {
  } else if (name == "ambiguity") {
    p.blue_for_cyan = 0.5;
  } else if (name == "relation-heavy") {
    p.take = 1;
    p.move_measure = 1;
    p.move_one = 0;
    p.figure_one = 1;
    p.bare_type = 0;
    p.color_type = 1;
    p.indicator = 0;
    p.relation = 8;
    p.max_relation_depth = 3;
    p.min_shapes = 10;
    p.max_shapes = 18;
  } else if (name == "mixed") {
    p.blue_for_cyan = 0.25;
    p.relation = 4;
    p.max_relation_depth = 2;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown generator profile '" + name + "'");
  }
  return p;
}

std::vector<TreebankRecord> GenerateCorpus(std::uint64_t seed, int count,
                                           const GeneratorProfile &profile,
                                           const GeneratorOptions &options) {
  if (count < 1) throw Error(ErrorCode::kInvalidArgument, "count must be at least 1");
  Generator generator(seed, profile);
  std::vector<TreebankRecord> pool;
  std::vector<TreebankRecord> kept;
  for (int round = 0; round < 16; ++round) {
    const int missing = count - static_cast<int>(kept.size());
    const int batch = missing + missing / 4 + 8;
    for (int i = 0; i < batch; ++i) {
      pool.push_back(generator.Candidate(static_cast<int>(pool.size()) + 1));
    }
    if (!options.filter_unresolved) {
      kept.assign(pool.begin(), pool.begin() + count);
      break;
    }
    const TrainedModel model = TrainedModel::Train(pool);
    kept.clear();
    for (const TreebankRecord &r : pool) {
      if (Resolved(model, r)) kept.push_back(r);
    }
    if (static_cast<int>(kept.size()) >= count) break;
  }
  if (static_cast<int>(kept.size()) < count) {
    throw Error(ErrorCode::kInvalidArgument,
                "profile '" + profile.name + "' cannot produce enough resolvable records");
  }
  kept.resize(count);
  for (int i = 0; i < count; ++i) kept[i].id = i + 1;
  return kept;
}

std::vector<TreebankRecord> GenerateCorpus(std::uint64_t seed, int count,
                                           const std::string &profile,
                                           const GeneratorOptions &options) {
  return GenerateCorpus(seed, count, GetGeneratorProfile(profile), options);
}

}  // namespace rcparse
