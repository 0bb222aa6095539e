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

#ifndef RCPARSE_PLANNER_H_
#define RCPARSE_PLANNER_H_

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rcparse/losr.h"
#include "rcparse/world.h"

namespace rcparse {

enum class GroundingKind { kShape, kStack, kCell, kRegion, kHeld };

const char *GroundingKindString(GroundingKind kind);

// A realization of an entity description in a world model.
//   shape:  shapes = {s},             cells = {s.cell()}
//   stack:  shapes = column (by z),   cells = {column cell}
//   cell:   cells = {c}
//   region: cells = non-empty sorted cell set
//   held:   held = gripper payload, no cells
struct Grounding {
  GroundingKind kind = GroundingKind::kShape;
  std::vector<Shape> shapes;
  std::vector<Cell> cells;
  std::optional<ShapePayload> held;

  static Grounding OfShape(const Shape &shape);
  static Grounding OfStack(std::vector<Shape> column);
  static Grounding OfCell(Cell cell);
  static Grounding OfRegion(std::vector<Cell> cells);
  static Grounding OfHeld(const ShapePayload &payload);

  std::string ToString() const;

  friend bool operator==(const Grounding &, const Grounding &) = default;
};

bool operator<(const Grounding &a, const Grounding &b);

// Anaphora bindings threaded through command execution.
struct Bindings {
  // id -> grounding of the antecedent (identity anaphora).
  std::map<int, Grounding> groundings;
  // id -> type value of the antecedent (type anaphora).
  std::map<int, std::string> types;
};

struct GroundOptions {
  // Require stack colors to appear bottom-to-top in the listed order rather
  // than mere containment.
  bool ordered_stack_colors = false;
};

// Memo of grounding sets keyed by canonical entity text, plus the
// per-type candidate universes. Only valid for a single world. Entities containing references bypass it when bindings are
// given.
using GroundingCache = std::unordered_map<std::string, std::vector<Grounding>>;

// E(e, M): the sorted set of groundings of an entity description.
//
// With bindings == nullptr references are not resolvable; they are then
// over-approximated by every shape and stack (after their own restricting
// features), so that callers probing partial trees never lose a reading.
// With bindings, an unbound reference throws Error(kUnboundReference).
std::vector<Grounding> Ground(const LosrNode &entity, const WorldModel &world,
                              const Bindings *bindings,
                              const GroundOptions &options = {},
                              GroundingCache *cache = nullptr);

// Ground() without bindings through `cache`. The reference stays valid while
// the cache lives.
const std::vector<Grounding> &GroundCached(const LosrNode &entity, const WorldModel &world,
                                           const GroundOptions &options,
                                           GroundingCache *cache);

// Spatial relation between two groundings. measure is the cardinal of an
// optional quantitative measure (unit: tile). Throws Error(kMeasureNotAdmitted)
// when a measure is given for a relation other than left/right/front/behind.
// 'nearest' holds for every positioned pair; the minimum-distance selection
// is applied by Ground() over the surviving candidates.
bool RelationHolds(std::string_view relation, std::optional<int> measure,
                   const Grounding &a, const Grounding &b);

struct PlanStep {
  enum class Kind { kPickUp, kPlaceAt };
  Kind kind;
  Cell cell;

  friend bool operator==(const PlanStep &, const PlanStep &) = default;
};

struct Plan {
  std::vector<PlanStep> steps;
  // Grounding of the event's theme at validation time.
  Grounding theme;
};

WorldModel ExecutePlan(const WorldModel &world, const Plan &plan);

// Candidate target cells of a destination node. Throws
// Error(kLandmarkUngroundable) or Error(kOffBoard). `cache` must belong to
// `world`.
std::vector<Cell> ResolveDestination(const LosrNode &destination,
                                     const WorldModel &world,
                                     const Bindings *bindings,
                                     const GroundOptions &options = {},
                                     GroundingCache *cache = nullptr);

// A(a, M) for one event: returns the plan or throws Error with
// kNoGrounding, kAmbiguous or kPhysicallyInvalid (or a destination error).
// `cache` must belong to `world`.
Plan ValidateAction(const LosrNode &event, const WorldModel &world,
                    const Bindings &bindings, const GroundOptions &options = {},
                    GroundingCache *cache = nullptr);

struct ExecutionTrace {
  WorldModel final_world;
  std::vector<Plan> plans;
  Bindings bindings;
};

// Validates and executes every event in order. Errors are rethrown with the
// failing event index in Error::index(). `cache` must belong to `world`; it
// serves the first event only.
ExecutionTrace TraceSequence(const LosrNode &root, const WorldModel &world,
                             const GroundOptions &options = {},
                             GroundingCache *cache = nullptr);

WorldModel ExecuteSequence(const LosrNode &root, const WorldModel &world,
                           const GroundOptions &options = {});

}  // namespace rcparse

#endif  // RCPARSE_PLANNER_H_
