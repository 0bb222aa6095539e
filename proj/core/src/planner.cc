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

#include "rcparse/planner.h"

#include <algorithm>
#include <limits>
#include <sstream>
#include <tuple>

#include "rcparse/errors.h"

namespace rcparse {
namespace {

bool IsDirectional(std::string_view relation) {
  return relation == "left" || relation == "right" || relation == "front" ||
         relation == "behind";
}

bool Contains(const std::vector<Cell> &cells, Cell cell) {
  return std::find(cells.begin(), cells.end(), cell) != cells.end();
}

// Anchor coordinate used by the extremal indicator filters.
struct Anchor {
  double x, y, z;
};

Anchor AnchorOf(const Grounding &g) {
  switch (g.kind) {
    case GroundingKind::kShape:
      return {double(g.shapes[0].x), double(g.shapes[0].y), double(g.shapes[0].z)};
    case GroundingKind::kStack:
      return {double(g.cells[0].x), double(g.cells[0].y),
              double(g.shapes.back().z)};
    case GroundingKind::kCell:
      return {double(g.cells[0].x), double(g.cells[0].y), 0.0};
    case GroundingKind::kRegion: {
      double sx = 0, sy = 0;
      for (const Cell &c : g.cells) {
        sx += c.x;
        sy += c.y;
      }
      return {sx / g.cells.size(), sy / g.cells.size(), 0.0};
    }
    case GroundingKind::kHeld:
      break;
  }
  return {0, 0, 0};
}

int SquaredDistance(const Grounding &a, const Grounding &b) {
  int best = std::numeric_limits<int>::max();
  for (const Cell &ca : a.cells) {
    for (const Cell &cb : b.cells) {
      int dx = ca.x - cb.x, dy = ca.y - cb.y;
      best = std::min(best, dx * dx + dy * dy);
    }
  }
  return best;
}

bool Above(const Grounding &a, const Grounding &b) {
  if (a.kind != GroundingKind::kShape && a.kind != GroundingKind::kStack) {
    return false;
  }
  const Cell ca = a.cells[0];
  const int az = a.shapes.front().z;
  switch (b.kind) {
    case GroundingKind::kShape:
      return ca == b.cells[0] && az > b.shapes[0].z;
    case GroundingKind::kStack:
      return ca == b.cells[0] && az > b.shapes.back().z;
    case GroundingKind::kCell:
    case GroundingKind::kRegion:
      return Contains(b.cells, ca);
    case GroundingKind::kHeld:
      return false;
  }
  return false;
}

// a is left of b; with a measure, exactly n tiles left on the same row.
bool LeftOf(const Grounding &a, const Grounding &b, std::optional<int> n) {
  for (const Cell &ca : a.cells) {
    for (const Cell &cb : b.cells) {
      if (n ? (ca.x == cb.x - *n && ca.y == cb.y) : ca.x < cb.x) return true;
    }
  }
  return false;
}

// a is in front of b (nearer the viewer, smaller y).
bool FrontOf(const Grounding &a, const Grounding &b, std::optional<int> n) {
  for (const Cell &ca : a.cells) {
    for (const Cell &cb : b.cells) {
      if (n ? (ca.y == cb.y - *n && ca.x == cb.x) : ca.y < cb.y) return true;
    }
  }
  return false;
}

bool Adjacent(const Grounding &a, const Grounding &b) {
  for (const Cell &ca : a.cells) {
    for (const Cell &cb : b.cells) {
      if (std::max(std::abs(ca.x - cb.x), std::abs(ca.y - cb.y)) == 1) return true;
    }
  }
  return false;
}

bool Within(const Grounding &a, const Grounding &b) {
  for (const Cell &ca : a.cells) {
    if (Contains(b.cells, ca)) return true;
  }
  return false;
}

using RelationTest = bool (*)(const Grounding &, const Grounding &, std::optional<int>);

// Predicate of a relation name; nullptr when unknown. 'nearest' holds for
// every pair.
RelationTest FindRelationTest(std::string_view relation) {
  using G = const Grounding &;
  using N = std::optional<int>;
  if (relation == "above") return [](G a, G b, N) { return Above(a, b); };
  if (relation == "below") return [](G a, G b, N) { return Above(b, a); };
  if (relation == "left") return [](G a, G b, N n) { return LeftOf(a, b, n); };
  if (relation == "right") return [](G a, G b, N n) { return LeftOf(b, a, n); };
  if (relation == "front") return [](G a, G b, N n) { return FrontOf(a, b, n); };
  if (relation == "behind") return [](G a, G b, N n) { return FrontOf(b, a, n); };
  if (relation == "adjacent") return [](G a, G b, N) { return Adjacent(a, b); };
  if (relation == "within") return [](G a, G b, N) { return Within(a, b); };
  if (relation == "nearest") return [](G, G, N) { return true; };
  return nullptr;
}

RelationTest CheckedRelationTest(std::string_view relation, std::optional<int> measure) {
  if (measure && !IsDirectional(relation)) {
    throw Error(ErrorCode::kMeasureNotAdmitted,
                "relation '" + std::string(relation) + "' takes no measure");
  }
  RelationTest test = FindRelationTest(relation);
  if (test == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown relation '" + std::string(relation) + "'");
  }
  return test;
}

bool Related(RelationTest test, std::optional<int> measure, const Grounding &a,
             const Grounding &b) {
  if (a.kind == GroundingKind::kHeld || b.kind == GroundingKind::kHeld) return false;
  if (a == b) return false;
  return test(a, b, measure);
}

std::vector<Grounding> AllShapes(const WorldModel &world,
                                 std::optional<ShapeType> type) {
  std::vector<Grounding> out;
  for (const Shape &s : world.shapes()) {
    if (!type || s.type == *type) out.push_back(Grounding::OfShape(s));
  }
  return out;
}

std::vector<Grounding> AllStacks(const WorldModel &world) {
  std::vector<Grounding> out;
  for (const Cell &cell : world.OccupiedCells()) {
    auto column = world.Column(cell);
    if (column.size() >= 2) {
      out.push_back(Grounding::OfStack({column.begin(), column.end()}));
    }
  }
  return out;
}

std::vector<Grounding> Universe(const std::string &type, const WorldModel &world) {
  const int n = world.board_size();
  if (type.empty()) return AllShapes(world, std::nullopt);
  if (type == "cube") return AllShapes(world, ShapeType::kCube);
  if (type == "prism") return AllShapes(world, ShapeType::kPrism);
  if (type == "stack") return AllStacks(world);
  std::vector<Grounding> out;
  if (type == "tile") {
    for (const Cell &c : world.Cells()) out.push_back(Grounding::OfCell(c));
  } else if (type == "corner") {
    for (Cell c : {Cell{0, 0}, Cell{n - 1, 0}, Cell{0, n - 1}, Cell{n - 1, n - 1}}) {
      out.push_back(Grounding::OfCell(c));
    }
  } else if (type == "edge") {
    std::vector<Cell> left, right, front, back;
    for (int i = 0; i < n; ++i) {
      left.push_back({0, i});
      right.push_back({n - 1, i});
      front.push_back({i, 0});
      back.push_back({i, n - 1});
    }
    for (auto *edge : {&left, &right, &front, &back}) {
      out.push_back(Grounding::OfRegion(*edge));
    }
  } else if (type == "board" || type == "region") {
    out.push_back(Grounding::OfRegion(world.Cells()));
  } else {
    throw Error(ErrorCode::kUnknownType, "cannot ground type '" + type + "'");
  }
  return out;
}

std::string TypeOfGrounding(const Grounding &g) {
  switch (g.kind) {
    case GroundingKind::kShape: return ShapeTypeString(g.shapes[0].type);
    case GroundingKind::kStack: return "stack";
    case GroundingKind::kCell: return "tile";
    case GroundingKind::kRegion: return "region";
    case GroundingKind::kHeld: return ShapeTypeString(g.held->type);
  }
  return "";
}

bool MatchesColors(const Grounding &g, const std::vector<std::string> &colors,
                   const GroundOptions &options) {
  if (colors.empty()) return true;
  switch (g.kind) {
    case GroundingKind::kShape:
      for (const auto &c : colors) {
        if (g.shapes[0].color != c) return false;
      }
      return true;
    case GroundingKind::kHeld:
      for (const auto &c : colors) {
        if (g.held->color != c) return false;
      }
      return true;
    case GroundingKind::kStack:
      if (options.ordered_stack_colors) {
        size_t next = 0;
        for (const Shape &s : g.shapes) {
          if (next < colors.size() && s.color == colors[next]) ++next;
        }
        return next == colors.size();
      }
      for (const auto &c : colors) {
        bool found = false;
        for (const Shape &s : g.shapes) found |= s.color == c;
        if (!found) return false;
      }
      return true;
    case GroundingKind::kCell:
    case GroundingKind::kRegion:
      return false;
  }
  return false;
}

std::optional<int> MeasureOf(const LosrNode &relation_node) {
  for (const NodePtr &child : relation_node.children()) {
    if (child->label() != Label::kMeasure) continue;
    const Feature *unit = child->FindFeature(FeatureName::kType);
    if (unit == nullptr || unit->value != "tile") {
      throw Error(ErrorCode::kInvalidArgument, "measure unit must be tile");
    }
    return child->FindFeature(FeatureName::kCardinal)->IntValue();
  }
  return std::nullopt;
}

NodePtr LandmarkOf(const LosrNode &relation_node) {
  for (const NodePtr &child : relation_node.children()) {
    if (child->label() == Label::kEntity) return child;
  }
  return nullptr;
}

void SortUnique(std::vector<Grounding> *groundings) {
  std::sort(groundings->begin(), groundings->end());
  groundings->erase(std::unique(groundings->begin(), groundings->end()),
                    groundings->end());
}

// Bindings only affect references.
bool Cacheable(const LosrNode &entity, const Bindings *bindings, const GroundingCache *cache) {
  return cache != nullptr &&
         (bindings == nullptr ||
          entity.canonical().find("(type: reference)") == std::string::npos);
}

const std::vector<Grounding> &GroundCached(const LosrNode &entity, const WorldModel &world,
                                           const GroundOptions &options,
                                           const Bindings *bindings, GroundingCache *cache);

std::vector<Grounding> GroundUncached(const LosrNode &entity,
                                      const WorldModel &world,
                                      const Bindings *bindings,
                                      const GroundOptions &options,
                                      GroundingCache *cache) {
  std::vector<std::string> colors;
  std::vector<std::string> indicators;
  const Feature *type = nullptr;
  const Feature *reference_id = nullptr;
  for (const Item &item : entity.items()) {
    if (const auto *f = std::get_if<Feature>(&item)) {
      switch (f->name) {
        case FeatureName::kColor: colors.push_back(f->value); break;
        case FeatureName::kIndicator: indicators.push_back(f->value); break;
        case FeatureName::kType: type = f; break;
        case FeatureName::kReferenceId: reference_id = f; break;
        default: break;
      }
    }
  }
  const bool restricting = !colors.empty() || !indicators.empty() ||
                           !entity.children().empty();

  // (1) universe. Filtering works on pointers into it.
  std::vector<Grounding> owned;
  const std::vector<Grounding> *universe = &owned;
  if (type != nullptr && type->value == "reference") {
    if (bindings == nullptr) {
      owned = AllShapes(world, std::nullopt);
      for (auto &g : AllStacks(world)) owned.push_back(std::move(g));
    } else {
      if (reference_id == nullptr) {
        throw Error(ErrorCode::kUnboundReference, "reference without reference-id");
      }
      const int id = reference_id->IntValue();
      auto bound = bindings->groundings.find(id);
      if (!restricting) {
        if (bound == bindings->groundings.end()) {
          throw Error(ErrorCode::kUnboundReference,
                      "reference-id " + std::to_string(id) + " is unbound");
        }
        return {bound->second};
      }
      std::string antecedent_type;
      if (auto t = bindings->types.find(id); t != bindings->types.end()) {
        antecedent_type = t->second;
      } else if (bound != bindings->groundings.end()) {
        antecedent_type = TypeOfGrounding(bound->second);
      } else {
        throw Error(ErrorCode::kUnboundReference,
                    "reference-id " + std::to_string(id) + " is unbound");
      }
      owned = Universe(antecedent_type == "reference" ? "" : antecedent_type, world);
    }
  } else if (cache != nullptr) {
    // Universes are memoized under keys that are not entity texts.
    const std::string key = "universe " + (type != nullptr ? type->value : "");
    auto it = cache->find(key);
    if (it == cache->end()) {
      std::vector<Grounding> all = Universe(type != nullptr ? type->value : "", world);
      SortUnique(&all);
      it = cache->emplace(key, std::move(all)).first;
    }
    universe = &it->second;
  } else {
    owned = Universe(type != nullptr ? type->value : "", world);
  }

  // (2) colors.
  std::vector<const Grounding *> candidates;
  candidates.reserve(universe->size());
  for (const Grounding &g : *universe) {
    if (colors.empty() || MatchesColors(g, colors, options)) candidates.push_back(&g);
  }

  // (3) spatial relations, in surface order.
  for (const NodePtr &child : entity.children()) {
    if (candidates.empty()) break;
    const std::string &relation = child->FindFeature(FeatureName::kRelation)->value;
    std::optional<int> measure = MeasureOf(*child);
    NodePtr landmark = LandmarkOf(*child);
    std::vector<Grounding> owned_landmarks;
    const std::vector<Grounding> *landmarks_ptr = &owned_landmarks;
    if (landmark != nullptr) {
      if (Cacheable(*landmark, bindings, cache)) {
        landmarks_ptr = &GroundCached(*landmark, world, options, bindings, cache);
      } else {
        owned_landmarks = GroundUncached(*landmark, world, bindings, options, nullptr);
      }
    }
    const std::vector<Grounding> &landmarks = *landmarks_ptr;
    if (relation == "nearest") {
      if (measure) {
        throw Error(ErrorCode::kMeasureNotAdmitted, "'nearest' takes no measure");
      }
      std::vector<bool> keep(candidates.size(), false);
      for (const Grounding &g : landmarks) {
        if (g.cells.empty()) continue;
        int best = std::numeric_limits<int>::max();
        for (const Grounding *c : candidates) {
          if (*c == g || c->cells.empty()) continue;
          best = std::min(best, SquaredDistance(*c, g));
        }
        for (size_t i = 0; i < candidates.size(); ++i) {
          const Grounding &c = *candidates[i];
          if (c == g || c.cells.empty()) continue;
          if (SquaredDistance(c, g) == best) keep[i] = true;
        }
      }
      std::vector<const Grounding *> kept;
      for (size_t i = 0; i < candidates.size(); ++i) {
        if (keep[i]) kept.push_back(candidates[i]);
      }
      candidates = std::move(kept);
      continue;
    }
    const RelationTest test = CheckedRelationTest(relation, measure);
    std::erase_if(candidates, [&](const Grounding *c) {
      for (const Grounding &g : landmarks) {
        if (Related(test, measure, *c, g)) return false;
      }
      return true;
    });
  }

  // (4) indicators as extremal filters, left to right.
  for (const std::string &indicator : indicators) {
    std::erase_if(candidates,
                  [](const Grounding *g) { return g->kind == GroundingKind::kHeld; });
    if (candidates.empty()) break;
    auto key = [&](const Grounding *g) {
      Anchor a = AnchorOf(*g);
      if (indicator == "left") return -a.x;
      if (indicator == "right") return a.x;
      if (indicator == "front") return -a.y;
      if (indicator == "back") return a.y;
      return a.z;  // top
    };
    double best = -std::numeric_limits<double>::infinity();
    for (const Grounding *g : candidates) best = std::max(best, key(g));
    std::erase_if(candidates, [&](const Grounding *g) { return key(g) != best; });
  }

  std::vector<Grounding> out;
  out.reserve(candidates.size());
  for (const Grounding *g : candidates) out.push_back(*g);
  if (universe == &owned) SortUnique(&out);
  return out;
}

const std::vector<Grounding> &GroundCached(const LosrNode &entity, const WorldModel &world,
                                           const GroundOptions &options,
                                           const Bindings *bindings, GroundingCache *cache) {
  if (auto it = cache->find(entity.canonical()); it != cache->end()) return it->second;
  auto result = GroundUncached(entity, world, bindings, options, cache);
  return cache->emplace(entity.canonical(), std::move(result)).first->second;
}

void CollectTypes(const NodePtr &node, Bindings *bindings) {
  if (node->label() == Label::kEntity) {
    if (const Feature *id = node->FindFeature(FeatureName::kId)) {
      const Feature *type = node->FindFeature(FeatureName::kType);
      bindings->types[id->IntValue()] = type != nullptr ? type->value : "";
    }
  }
  for (const NodePtr &child : node->children()) CollectTypes(child, bindings);
}

[[noreturn]] void Invalid(const std::string &message) {
  throw Error(ErrorCode::kPhysicallyInvalid, message);
}

// The unique legal target cell among the candidates.
Cell PickTargetCell(const std::vector<Cell> &cells, const WorldModel &world) {
  std::vector<Cell> legal;
  for (const Cell &c : cells) {
    if (AdmitsPlacement(world, c)) legal.push_back(c);
  }
  if (legal.empty()) {
    if (cells.empty()) throw Error(ErrorCode::kNoGrounding, "no destination cell");
    Invalid("no destination cell can support the shape");
  }
  if (legal.size() > 1) {
    throw Error(ErrorCode::kAmbiguous,
                std::to_string(legal.size()) + " destination cells");
  }
  return legal[0];
}

// Unique, liftable shape grounding of a theme entity on the board.
Grounding GroundLiftableTheme(const LosrNode &theme, const WorldModel &world,
                              const Bindings &bindings, const GroundOptions &options,
                              GroundingCache *cache) {
  std::vector<Grounding> groundings = Ground(theme, world, &bindings, options, cache);
  if (groundings.empty()) throw Error(ErrorCode::kNoGrounding, "theme has no grounding");
  if (groundings.size() > 1) {
    throw Error(ErrorCode::kAmbiguous,
                "theme has " + std::to_string(groundings.size()) + " groundings");
  }
  const Grounding &g = groundings[0];
  if (g.kind != GroundingKind::kShape) {
    Invalid(std::string("cannot lift a ") + GroundingKindString(g.kind));
  }
  const Shape &shape = g.shapes[0];
  const Shape *top = world.Top(shape.cell());
  if (top == nullptr || !(*top == shape)) Invalid("shape is buried under another shape");
  return g;
}

// Whether the held payload is consistent with a drop theme.
bool HeldMatchesTheme(const LosrNode &theme, const ShapePayload &held,
                      const Bindings &bindings) {
  if (theme.IsReference()) {
    std::vector<Grounding> g;
    try {
      g = Ground(theme, WorldModel(1), &bindings);
    } catch (const Error &) {
      return false;
    }
    if (g.size() == 1 && g[0].kind == GroundingKind::kHeld) return *g[0].held == held;
    if (g.size() == 1 && g[0].kind == GroundingKind::kShape) {
      return g[0].shapes[0].payload() == held;
    }
    // Type anaphora: compare the copied type and the restricting colors.
    const Feature *rid = theme.FindFeature(FeatureName::kReferenceId);
    if (rid == nullptr) return false;
    auto t = bindings.types.find(rid->IntValue());
    if (t == bindings.types.end() || t->second != ShapeTypeString(held.type)) {
      return false;
    }
  } else if (const Feature *type = theme.FindFeature(FeatureName::kType)) {
    if (type->value != ShapeTypeString(held.type)) return false;
  }
  if (!theme.children().empty() || theme.CountFeature(FeatureName::kIndicator) > 0) {
    return false;
  }
  for (const Feature &f : theme.features()) {
    if (f.name == FeatureName::kColor && f.value != held.color) return false;
  }
  return true;
}

}  // namespace

const char *GroundingKindString(GroundingKind kind) {
  switch (kind) {
    case GroundingKind::kShape: return "shape";
    case GroundingKind::kStack: return "stack";
    case GroundingKind::kCell: return "cell";
    case GroundingKind::kRegion: return "region";
    case GroundingKind::kHeld: return "held";
  }
  return "?";
}

Grounding Grounding::OfShape(const Shape &shape) {
  return {GroundingKind::kShape, {shape}, {shape.cell()}, std::nullopt};
}

Grounding Grounding::OfStack(std::vector<Shape> column) {
  Cell cell = column.front().cell();
  return {GroundingKind::kStack, std::move(column), {cell}, std::nullopt};
}

Grounding Grounding::OfCell(Cell cell) {
  return {GroundingKind::kCell, {}, {cell}, std::nullopt};
}

Grounding Grounding::OfRegion(std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return {GroundingKind::kRegion, {}, std::move(cells), std::nullopt};
}

Grounding Grounding::OfHeld(const ShapePayload &payload) {
  return {GroundingKind::kHeld, {}, {}, payload};
}

std::string Grounding::ToString() const {
  std::ostringstream out;
  out << GroundingKindString(kind);
  if (kind == GroundingKind::kHeld) {
    out << " " << held->color << " " << ShapeTypeString(held->type);
    return out.str();
  }
  for (const Shape &s : shapes) {
    out << " " << s.color << "-" << ShapeTypeString(s.type) << "@(" << s.x << ","
        << s.y << "," << s.z << ")";
  }
  if (shapes.empty()) {
    for (const Cell &c : cells) out << " (" << c.x << "," << c.y << ")";
  }
  return out.str();
}

bool operator<(const Grounding &a, const Grounding &b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.cells != b.cells) return a.cells < b.cells;
  if (a.shapes.size() != b.shapes.size()) return a.shapes.size() < b.shapes.size();
  for (size_t i = 0; i < a.shapes.size(); ++i) {
    const Shape &x = a.shapes[i], &y = b.shapes[i];
    auto kx = std::tie(x.z, x.type, x.color);
    auto ky = std::tie(y.z, y.type, y.color);
    if (kx != ky) return kx < ky;
  }
  if (a.held.has_value() != b.held.has_value()) return !a.held.has_value();
  if (a.held) {
    return std::tie(a.held->type, a.held->color) < std::tie(b.held->type, b.held->color);
  }
  return false;
}

bool RelationHolds(std::string_view relation, std::optional<int> measure,
                   const Grounding &a, const Grounding &b) {
  return Related(CheckedRelationTest(relation, measure), measure, a, b);
}

std::vector<Grounding> Ground(const LosrNode &entity, const WorldModel &world,
                              const Bindings *bindings,
                              const GroundOptions &options,
                              GroundingCache *cache) {
  if (entity.label() != Label::kEntity) {
    throw Error(ErrorCode::kInvalidArgument, "Ground() expects an entity node");
  }
  if (!Cacheable(entity, bindings, cache)) {
    return GroundUncached(entity, world, bindings, options, nullptr);
  }
  return GroundCached(entity, world, options, bindings, cache);
}

const std::vector<Grounding> &GroundCached(const LosrNode &entity, const WorldModel &world,
                                           const GroundOptions &options,
                                           GroundingCache *cache) {
  if (entity.label() != Label::kEntity) {
    throw Error(ErrorCode::kInvalidArgument, "Ground() expects an entity node");
  }
  return GroundCached(entity, world, options, nullptr, cache);
}

WorldModel ExecutePlan(const WorldModel &world, const Plan &plan) {
  WorldModel current = world;
  for (const PlanStep &step : plan.steps) {
    current = step.kind == PlanStep::Kind::kPickUp ? PickUp(current, step.cell)
                                                   : PlaceAt(current, step.cell);
  }
  return current;
}

std::vector<Cell> ResolveDestination(const LosrNode &destination,
                                     const WorldModel &world,
                                     const Bindings *bindings,
                                     const GroundOptions &options,
                                     GroundingCache *cache) {
  if (destination.label() != Label::kDestination) {
    throw Error(ErrorCode::kInvalidArgument,
                "ResolveDestination() expects a destination node");
  }
  auto children = destination.children();
  if (children.size() != 1) {
    throw Error(ErrorCode::kMalformedNode, "destination needs one spatial relation");
  }
  const LosrNode &relation_node = *children[0];
  const std::string &relation =
      relation_node.FindFeature(FeatureName::kRelation)->value;
  std::optional<int> measure = MeasureOf(relation_node);
  if (measure && !IsDirectional(relation)) {
    throw Error(ErrorCode::kMeasureNotAdmitted,
                "relation '" + relation + "' takes no measure");
  }
  NodePtr landmark = LandmarkOf(relation_node);
  std::vector<Grounding> landmarks;
  if (landmark != nullptr) landmarks = Ground(*landmark, world, bindings, options, cache);
  std::erase_if(landmarks,
                [](const Grounding &g) { return g.kind == GroundingKind::kHeld; });
  if (landmarks.empty()) {
    throw Error(ErrorCode::kLandmarkUngroundable, "destination landmark has no grounding");
  }

  std::vector<Cell> cells;
  if (relation == "above" || relation == "within") {
    for (const Grounding &g : landmarks) {
      cells.insert(cells.end(), g.cells.begin(), g.cells.end());
    }
  } else if (measure) {
    int dx = 0, dy = 0;
    if (relation == "left") dx = -*measure;
    if (relation == "right") dx = *measure;
    if (relation == "front") dy = -*measure;
    if (relation == "behind") dy = *measure;
    for (const Grounding &g : landmarks) {
      for (const Cell &c : g.cells) {
        Cell target{c.x + dx, c.y + dy};
        if (world.InBounds(target)) cells.push_back(target);
      }
    }
    if (cells.empty()) {
      throw Error(ErrorCode::kOffBoard, "destination offset is off the board");
    }
  } else if (relation == "nearest") {
    int best = std::numeric_limits<int>::max();
    std::vector<std::pair<int, Cell>> scored;
    for (const Cell &c : world.Cells()) {
      Grounding cg = Grounding::OfCell(c);
      for (const Grounding &g : landmarks) {
        if (Contains(g.cells, c)) continue;
        int d = SquaredDistance(cg, g);
        scored.push_back({d, c});
        best = std::min(best, d);
      }
    }
    for (const auto &[d, c] : scored) {
      if (d == best) cells.push_back(c);
    }
  } else {
    for (const Cell &c : world.Cells()) {
      Grounding cg = Grounding::OfCell(c);
      for (const Grounding &g : landmarks) {
        if (RelationHolds(relation, std::nullopt, cg, g)) {
          cells.push_back(c);
          break;
        }
      }
    }
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  return cells;
}

Plan ValidateAction(const LosrNode &event, const WorldModel &world,
                    const Bindings &bindings, const GroundOptions &options,
                    GroundingCache *cache) {
  if (event.label() != Label::kEvent) {
    throw Error(ErrorCode::kInvalidArgument, "ValidateAction() expects an event");
  }
  const Feature *action = event.FindFeature(FeatureName::kAction);
  if (action == nullptr) throw Error(ErrorCode::kMalformedNode, "event without action");
  NodePtr theme, destination;
  for (const NodePtr &child : event.children()) {
    if (child->label() == Label::kEntity) {
      if (theme != nullptr) Invalid("event has more than one theme");
      theme = child;
    } else if (child->label() == Label::kDestination) {
      if (destination != nullptr) Invalid("event has more than one destination");
      destination = child;
    }
  }
  if (theme == nullptr) Invalid("event has no theme");

  Plan plan;
  if (action->value == "take") {
    if (destination != nullptr) Invalid("take has no destination");
    if (world.gripper()) Invalid("gripper already holds a shape");
    plan.theme = GroundLiftableTheme(*theme, world, bindings, options, cache);
    plan.steps.push_back({PlanStep::Kind::kPickUp, plan.theme.cells[0]});
    return plan;
  }
  if (destination == nullptr) Invalid(action->value + " needs a destination");
  if (action->value == "drop") {
    if (!world.gripper()) Invalid("gripper is empty");
    if (!HeldMatchesTheme(*theme, *world.gripper(), bindings)) {
      throw Error(ErrorCode::kNoGrounding, "held shape does not match the theme");
    }
    plan.theme = Grounding::OfHeld(*world.gripper());
    Cell target =
        PickTargetCell(ResolveDestination(*destination, world, &bindings, options, cache), world);
    plan.steps.push_back({PlanStep::Kind::kPlaceAt, target});
    return plan;
  }
  // move = take + drop.
  if (world.gripper()) Invalid("gripper already holds a shape");
  plan.theme = GroundLiftableTheme(*theme, world, bindings, options, cache);
  const Cell source = plan.theme.cells[0];
  WorldModel lifted = PickUp(world, source);
  Cell target = PickTargetCell(
      ResolveDestination(*destination, lifted, &bindings, options), lifted);
  if (target == source) Invalid("move leaves the shape where it is");
  plan.steps.push_back({PlanStep::Kind::kPickUp, source});
  plan.steps.push_back({PlanStep::Kind::kPlaceAt, target});
  return plan;
}

ExecutionTrace TraceSequence(const LosrNode &root, const WorldModel &world,
                             const GroundOptions &options, GroundingCache *cache) {
  std::vector<NodePtr> events;
  if (root.label() == Label::kSequence) {
    events = root.children();
  } else if (root.label() == Label::kEvent) {
    events.push_back(std::make_shared<const LosrNode>(root));
  } else {
    throw Error(ErrorCode::kInvalidArgument, "expected a sequence or an event");
  }
  ExecutionTrace trace{world, {}, {}};
  for (const NodePtr &event : events) CollectTypes(event, &trace.bindings);

  for (size_t i = 0; i < events.size(); ++i) {
    const LosrNode &event = *events[i];
    try {
      Plan plan = ValidateAction(event, trace.final_world, trace.bindings, options,
                                 i == 0 ? cache : nullptr);
      trace.final_world = ExecutePlan(trace.final_world, plan);
      // Rebind the theme to where the shape ended up.
      Grounding after = trace.final_world.gripper()
                            ? Grounding::OfHeld(*trace.final_world.gripper())
                            : Grounding::OfShape(
                                  *trace.final_world.Top(plan.steps.back().cell));
      NodePtr theme;
      for (const NodePtr &child : event.children()) {
        if (child->label() == Label::kEntity) theme = child;
      }
      if (const Feature *id = theme->FindFeature(FeatureName::kId)) {
        trace.bindings.groundings[id->IntValue()] = after;
      }
      if (const Feature *rid = theme->FindFeature(FeatureName::kReferenceId)) {
        if (!theme->children().empty() || theme->CountFeature(FeatureName::kColor) ||
            theme->CountFeature(FeatureName::kIndicator)) {
          // type anaphora: the theme is a distinct shape.
        } else {
          trace.bindings.groundings[rid->IntValue()] = after;
        }
      }
      trace.plans.push_back(std::move(plan));
    } catch (const Error &e) {
      throw Error(e.code(), "event " + std::to_string(i) + ": " + e.what(),
                  static_cast<int>(i));
    }
  }
  return trace;
}

WorldModel ExecuteSequence(const LosrNode &root, const WorldModel &world,
                           const GroundOptions &options) {
  return TraceSequence(root, world, options).final_world;
}

}  // namespace rcparse
