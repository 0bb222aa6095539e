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

#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "rcparse/errors.h"
#include "rcparse/generator.h"

namespace rcparse {
namespace {

constexpr ShapeType kCube = ShapeType::kCube;
constexpr ShapeType kPrism = ShapeType::kPrism;

ErrorCode CodeOf(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::kUsage;
}

std::vector<Grounding> G(const std::string &entity, const WorldModel &world) {
  return Ground(*Deserialize(entity), world, nullptr);
}

TEST(PlannerTest, GroundsByColorAndType) {
  WorldModel world(8, {{kCube, "red", 0, 0, 0}, {kCube, "blue", 1, 0, 0}});
  auto g = G("(entity: (color: red) (type: cube))", world);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0], Grounding::OfShape({kCube, "red", 0, 0, 0}));
}

TEST(PlannerTest, GroundsCornerWithIndicators) {
  auto g = G("(entity: (indicator: back) (indicator: right) (type: corner))", WorldModel());
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0], Grounding::OfCell({7, 7}));
}

TEST(PlannerTest, GroundsStackByContainedColors) {
  WorldModel world(8, {{kCube, "green", 3, 3, 0},
                       {kCube, "blue", 3, 3, 1},
                       {kCube, "blue", 5, 5, 0}});
  auto g = G("(entity: (color: blue) (color: green) (type: stack))", world);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].kind, GroundingKind::kStack);
  EXPECT_EQ(g[0].cells[0], (Cell{3, 3}));
  GroundOptions ordered;
  ordered.ordered_stack_colors = true;
  EXPECT_TRUE(Ground(*Deserialize("(entity: (color: blue) (color: green) (type: stack))"),
                     world, nullptr, ordered)
                  .empty());
}

TEST(PlannerTest, RejectsUnboundReference) {
  Bindings empty;
  EXPECT_EQ(CodeOf([&] {
              Ground(*Deserialize("(entity: (type: reference) (reference-id: 4))"), WorldModel(),
                     &empty);
            }),
            ErrorCode::kUnboundReference);
}

TEST(PlannerTest, RelationExamples) {
  const Grounding a = Grounding::OfShape({kCube, "red", 0, 0, 1});
  const Grounding b = Grounding::OfShape({kCube, "red", 0, 0, 0});
  EXPECT_TRUE(RelationHolds("above", std::nullopt, a, b));
  EXPECT_TRUE(RelationHolds("below", std::nullopt, b, a));
  const Grounding l1 = Grounding::OfShape({kCube, "red", 2, 3, 0});
  const Grounding l2 = Grounding::OfShape({kCube, "red", 1, 3, 0});
  const Grounding r = Grounding::OfShape({kCube, "red", 3, 3, 0});
  EXPECT_TRUE(RelationHolds("left", 1, l1, r));
  EXPECT_FALSE(RelationHolds("left", 1, l2, r));
  EXPECT_TRUE(RelationHolds("left", std::nullopt, l2, r));
  EXPECT_TRUE(RelationHolds("within", std::nullopt, Grounding::OfShape({kCube, "red", 7, 7, 0}),
                            Grounding::OfRegion({{7, 7}})));
  EXPECT_EQ(CodeOf([&] { RelationHolds("above", 1, a, b); }), ErrorCode::kMeasureNotAdmitted);
}

TEST(PlannerTest, RelationSymmetry) {
  std::mt19937_64 rng(5);
  const std::pair<const char *, const char *> pairs[] = {
      {"left", "right"}, {"front", "behind"}, {"above", "below"}};
  for (int trial = 0; trial < 200; ++trial) {
    WorldModel world = testing::RandomScene(&rng, 5, 10);
    std::vector<Grounding> all = G("(entity: (type: tile))", world);
    for (const Shape &s : world.shapes()) all.push_back(Grounding::OfShape(s));
    for (const Grounding &a : all) {
      for (const Grounding &b : all) {
        for (auto [x, y] : pairs) {
          EXPECT_EQ(RelationHolds(x, std::nullopt, a, b), RelationHolds(y, std::nullopt, b, a));
          if (std::string(x) != "above") {
            EXPECT_EQ(RelationHolds(x, 2, a, b), RelationHolds(y, 2, b, a));
          }
        }
      }
    }
  }
}

TEST(PlannerTest, MatchesNaiveOracle) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 1500; ++trial) {
    WorldModel world = testing::RandomScene(&rng, 3 + trial % 6, 14);
    NodePtr entity = testing::RandomEntity(&rng, 2);
    ASSERT_EQ(Ground(*entity, world, nullptr), testing::NaiveGround(*entity, world))
        << entity->canonical();
  }
}

TEST(PlannerTest, RelationChildNeverEnlargesResult) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    WorldModel world = testing::RandomScene(&rng, 6, 14);
    NodePtr entity = testing::RandomEntity(&rng, 0);
    // Indicators select extremes after relation filtering, so the property
    // is stated for indicator-free descriptions.
    if (entity->CountFeature(FeatureName::kIndicator) > 0) continue;
    const std::vector<NodePtr> relations = testing::RandomEntity(&rng, 1)->children();
    if (relations.empty()) continue;
    const NodePtr &relation = relations[0];
    std::vector<Item> items = entity->items();
    items.push_back(relation);
    NodePtr extended = LosrNode::Make(Label::kEntity, items);
    const auto base = Ground(*entity, world, nullptr);
    for (const Grounding &g : Ground(*extended, world, nullptr)) {
      EXPECT_NE(std::find(base.begin(), base.end(), g), base.end());
    }
  }
}

TEST(PlannerTest, ValidateActionTake) {
  WorldModel world(8, {{kCube, "red", 2, 2, 0}, {kCube, "blue", 4, 4, 0}});
  Bindings none;
  Plan plan = ValidateAction(*Deserialize("(event: (action: take) (entity: (color: red) "
                                          "(type: cube)))"),
                             world, none);
  ASSERT_EQ(plan.steps.size(), 1u);
  EXPECT_EQ(plan.steps[0], (PlanStep{PlanStep::Kind::kPickUp, {2, 2}}));
  EXPECT_EQ(CodeOf([&] {
              ValidateAction(*Deserialize("(event: (action: take) (entity: (type: cube)))"), world,
                             none);
            }),
            ErrorCode::kAmbiguous);
  EXPECT_EQ(CodeOf([&] {
              ValidateAction(*Deserialize("(event: (action: take) (entity: (type: prism)))"),
                             world, none);
            }),
            ErrorCode::kNoGrounding);
  WorldModel buried(8, {{kCube, "red", 2, 2, 0}, {kCube, "blue", 2, 2, 1}});
  EXPECT_EQ(CodeOf([&] {
              ValidateAction(*Deserialize("(event: (action: take) (entity: (color: red) "
                                          "(type: cube)))"),
                             buried, none);
            }),
            ErrorCode::kPhysicallyInvalid);
}

TEST(PlannerTest, ValidateActionDrop) {
  WorldModel world(8, {{kCube, "white", 2, 2, 0}}, ShapePayload{kPrism, "cyan"});
  Bindings bindings;
  bindings.groundings[1] = Grounding::OfHeld({kPrism, "cyan"});
  bindings.types[1] = "prism";
  Plan plan = ValidateAction(
      *Deserialize("(event: (action: drop) (entity: (type: reference) (reference-id: 1)) "
                   "(destination: (spatial-relation: (relation: above) (entity: (color: white) "
                   "(type: cube)))))"),
      world, bindings);
  ASSERT_EQ(plan.steps.size(), 1u);
  EXPECT_EQ(plan.steps[0], (PlanStep{PlanStep::Kind::kPlaceAt, {2, 2}}));
  EXPECT_TRUE(Validate(ExecutePlan(world, plan)).empty());
}

TEST(PlannerTest, ResolveDestination) {
  WorldModel world(8, {{kCube, "white", 2, 2, 0}, {kCube, "red", 4, 4, 0}});
  EXPECT_EQ(ResolveDestination(*Deserialize("(destination: (spatial-relation: (relation: above) "
                                            "(entity: (color: white) (type: cube))))"),
                               world, nullptr),
            (std::vector<Cell>{{2, 2}}));
  EXPECT_EQ(ResolveDestination(
                *Deserialize("(destination: (spatial-relation: (measure: (cardinal: 1) (type: "
                             "tile)) (relation: front) (entity: (color: red) (type: cube))))"),
                world, nullptr),
            (std::vector<Cell>{{4, 3}}));
  EXPECT_EQ(CodeOf([&] {
              ResolveDestination(*Deserialize("(destination: (spatial-relation: (relation: "
                                              "above) (entity: (type: prism))))"),
                                 world, nullptr);
            }),
            ErrorCode::kLandmarkUngroundable);
  EXPECT_EQ(CodeOf([&] {
              ResolveDestination(
                  *Deserialize("(destination: (spatial-relation: (measure: (cardinal: 4) (type: "
                               "tile)) (relation: behind) (entity: (color: red) (type: cube))))"),
                  world, nullptr);
            }),
            ErrorCode::kOffBoard);
}

TEST(PlannerTest, FigureThreeExecution) {
  WorldModel world(8, {{kCube, "white", 1, 1, 0},
                       {kPrism, "cyan", 1, 1, 1},
                       {kPrism, "cyan", 6, 0, 0},
                       {kCube, "green", 4, 5, 0},
                       {kCube, "blue", 4, 5, 1}});
  ExecutionTrace trace = TraceSequence(*Deserialize(testing::FigureThreeText()), world);
  const WorldModel &after = trace.final_world;
  EXPECT_TRUE(Validate(after).empty());
  EXPECT_EQ(*after.Top({4, 5}), (Shape{kPrism, "cyan", 4, 5, 2}));
  EXPECT_EQ(after.ColumnHeight({1, 1}), 1);
  EXPECT_FALSE(after.gripper());
  EXPECT_EQ(trace.plans.size(), 2u);
}

TEST(PlannerTest, ErrorsCarryEventIndex) {
  WorldModel world(8, {{kCube, "red", 0, 0, 0}}, ShapePayload{kCube, "blue"});
  try {
    ExecuteSequence(*Deserialize("(event: (action: take) (entity: (type: cube)))"), world);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.index(), 0);
    EXPECT_EQ(e.code(), ErrorCode::kPhysicallyInvalid);
  }
}

TEST(PlannerTest, GeneratedRecordsExecute) {
  for (const std::string &profile : GeneratorProfileNames()) {
    for (const TreebankRecord &r : GenerateCorpus(3, 100, profile)) {
      EXPECT_TRUE(ScenesEqual(ExecuteSequence(*r.gold, r.scene_before), r.scene_after))
          << r.gold->canonical();
    }
  }
}

}  // namespace
}  // namespace rcparse
