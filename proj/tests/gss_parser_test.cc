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


#include "rcparse/gss_parser.h"

#include <gtest/gtest.h>

#include <set>

#include "oracles.h"
#include "rcparse/errors.h"
#include "rcparse/generator.h"
#include "rcparse/pipeline.h"
#include "rcparse/postprocess.h"

namespace rcparse {
namespace {

constexpr ShapeType kCube = ShapeType::kCube;
constexpr ShapeType kPrism = ShapeType::kPrism;

Chunk C(const std::string &text, FeatureName feature, int start) {
  Chunk c;
  c.words = Tokenize(text);
  c.feature = feature;
  c.start = start;
  c.end = start + static_cast<int>(c.words.size());
  return c;
}

class SmallGrammarTest : public ::testing::Test {
 protected:
  void SetUp() override {
    grammar_.Add(Production::Parse("event -> action entity"));
    grammar_.Add(Production::Parse("entity -> color type"));
    grammar_.Add(Production::Parse("entity -> type"));
    grammar_.Add(Production::Parse("sequence -> event event"));
    lexicon_.Add("pick up", FeatureName::kAction, "take");
    lexicon_.Add("red", FeatureName::kColor, "red");
    lexicon_.Add("cube", FeatureName::kType, "cube");
    lexicon_.Add("blue", FeatureName::kColor, "blue", 3);
    lexicon_.Add("blue", FeatureName::kColor, "cyan", 1);
    lexicon_.Add("place", FeatureName::kAction, "move");
    lexicon_.Add("place", FeatureName::kAction, "drop");
    lexicon_.Add("on", FeatureName::kRelation, "above");
  }

  std::vector<Chunk> PickUpRedCube() const {
    return {C("pick up", FeatureName::kAction, 0), C("red", FeatureName::kColor, 2),
            C("cube", FeatureName::kType, 3)};
  }

  Grammar grammar_;
  Lexicon lexicon_;
  EllipsisTable ellipsis_;
  WorldModel red_scene_{8, {{kCube, "red", 2, 2, 0}, {kCube, "blue", 4, 4, 0}}};
  WorldModel green_scene_{8, {{kCube, "green", 2, 2, 0}}};
};

TEST_F(SmallGrammarTest, ParsesSingleEvent) {
  ParseForest forest = Parse(PickUpRedCube(), grammar_, lexicon_, ellipsis_, red_scene_);
  ASSERT_EQ(forest.trees.size(), 1u);
  EXPECT_EQ(forest.trees[0].tree->canonical(),
            "(event: (action: take) (entity: (color: red) (type: cube)))");
  EXPECT_DOUBLE_EQ(forest.trees[0].weight, 1.0);
}

TEST_F(SmallGrammarTest, PruningVersusExhaustive) {
  try {
    Parse(PickUpRedCube(), grammar_, lexicon_, ellipsis_, green_scene_);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoParse);
  }
  ParseForest forest = Parse(PickUpRedCube(), grammar_, lexicon_, ellipsis_, green_scene_,
                             {ParseMode::kExhaustive, {}});
  ASSERT_EQ(forest.trees.size(), 1u);
  try {
    VerifyAndScore(forest, green_scene_);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kAllRejected);
  }
}

TEST_F(SmallGrammarTest, ShiftCreatesFrontierOverPreviousFrontier) {
  std::vector<Chunk> chunks = {C("blue", FeatureName::kColor, 0),
                               C("place", FeatureName::kAction, 1)};
  GssParser parser(chunks, grammar_, lexicon_, ellipsis_, red_scene_);
  parser.Shift();
  ASSERT_EQ(parser.frontier().size(), 2u);
  for (int id : parser.frontier()) {
    EXPECT_EQ(parser.vertices()[id].successors, std::vector<int>{0});
  }
  const std::vector<int> first = parser.frontier();
  parser.Shift();
  ASSERT_EQ(parser.frontier().size(), 2u);
  std::set<std::string> items;
  for (int id : parser.frontier()) {
    const GssVertex &v = parser.vertices()[id];
    items.insert(v.ItemText());
    EXPECT_EQ(v.successors, first);
    EXPECT_EQ(v.frontier, 2);
  }
  EXPECT_EQ(items, (std::set<std::string>{"(action: move)", "(action: drop)"}));
  EXPECT_TRUE(parser.done());
}

TEST_F(SmallGrammarTest, ReduceBuildsAndCascades) {
  GssParser parser(PickUpRedCube(), grammar_, lexicon_, ellipsis_, red_scene_);
  parser.Shift();
  parser.Reduce();
  parser.Shift();
  parser.Reduce();
  parser.Shift();
  parser.Reduce();
  std::set<std::string> items;
  for (int id : parser.frontier()) items.insert(parser.vertices()[id].ItemText());
  EXPECT_TRUE(items.count("(entity: (color: red) (type: cube))"));
  EXPECT_TRUE(items.count("(event: (action: take) (entity: (color: red) (type: cube)))"));
  for (int id : parser.frontier()) {
    const GssVertex &v = parser.vertices()[id];
    if (v.ItemText() == "(entity: (color: red) (type: cube))") {
      EXPECT_EQ(v.span_start, 1);
      EXPECT_EQ(v.successors, std::vector<int>{1});
    }
  }
}

TEST_F(SmallGrammarTest, RejectsOovAndEmptyInput) {
  try {
    Parse({C("zork", FeatureName::kType, 0)}, grammar_, lexicon_, ellipsis_, red_scene_);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kOov);
  }
  EXPECT_THROW(Parse({}, grammar_, lexicon_, ellipsis_, red_scene_), Error);
}

TEST_F(SmallGrammarTest, SequenceAcceptedButNotPrefixEvent) {
  WorldModel scene(8, {{kCube, "red", 2, 2, 0}, {kCube, "green", 4, 4, 0}});
  lexicon_.Add("green", FeatureName::kColor, "green");
  std::vector<Chunk> chunks = PickUpRedCube();
  chunks.push_back(C("pick up", FeatureName::kAction, 5));
  chunks.push_back(C("green", FeatureName::kColor, 7));
  chunks.push_back(C("cube", FeatureName::kType, 8));
  ParseForest forest = Parse(chunks, grammar_, lexicon_, ellipsis_, scene);
  ASSERT_EQ(forest.trees.size(), 1u);
  EXPECT_EQ(forest.trees[0].tree->label(), Label::kSequence);
}

TEST_F(SmallGrammarTest, EllipsisInsertion) {
  ellipsis_.Add(FeatureName::kAction, FeatureName::kRelation);
  std::vector<Chunk> chunks = {C("place", FeatureName::kAction, 0),
                               C("on", FeatureName::kRelation, 1)};
  GssParser parser(chunks, grammar_, lexicon_, ellipsis_, red_scene_);
  EXPECT_FALSE(parser.AddEllipsis());
  parser.Shift();
  parser.Reduce();
  const std::vector<int> before = parser.frontier();
  ASSERT_TRUE(parser.AddEllipsis());
  ASSERT_EQ(parser.frontier().size(), 1u);
  const GssVertex &v = parser.vertices()[parser.frontier()[0]];
  EXPECT_TRUE(v.elliptical);
  EXPECT_EQ(v.ItemText(), "(entity: (type: reference))");
  std::vector<int> sorted = before;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(v.successors, sorted);
  parser.Shift();
  EXPECT_FALSE(parser.AddEllipsis());

  GssParser other({C("place", FeatureName::kAction, 0), C("red", FeatureName::kColor, 1)},
                  grammar_, lexicon_, ellipsis_, red_scene_);
  other.Shift();
  EXPECT_FALSE(other.AddEllipsis());
}

TEST_F(SmallGrammarTest, DumpListsEveryVertex) {
  GssParser parser(PickUpRedCube(), grammar_, lexicon_, ellipsis_, red_scene_);
  parser.Run();
  const std::string dump = parser.Dump();
  EXPECT_EQ(std::count(dump.begin(), dump.end(), '\n'),
            static_cast<long>(parser.vertices().size()));
  EXPECT_EQ(dump.substr(0, dump.find('\n')), "0\t0\t0\tBOTTOM\t");
}

const TrainedModel &MixedModel() {
  static const TrainedModel *model = [] {
    std::vector<TreebankRecord> records = GenerateCorpus(1, 500, "mixed");
    return new TrainedModel(TrainedModel::Train(records));
  }();
  return *model;
}

std::set<std::string> Verified(const ParseForest &forest, const WorldModel &world) {
  std::set<std::string> out;
  for (const ScoredParse &s : ScoreForest(forest, world)) {
    if (s.verified) out.insert(s.tree->canonical());
  }
  return out;
}

TEST(GssParserTest, StructuralInvariantsOnCorpus) {
  const TrainedModel &model = MixedModel();
  for (const TreebankRecord &r : GenerateCorpus(2, 150, "mixed")) {
    const std::vector<Chunk> chunks = GoldChunks(r);
    GssParser pruned(chunks, model.grammar, model.lexicon, model.ellipsis, r.scene_before);
    GssParser exhaustive(chunks, model.grammar, model.lexicon, model.ellipsis, r.scene_before,
                         {ParseMode::kExhaustive, {}});
    ParseForest a, b;
    try {
      a = pruned.Run();
      b = exhaustive.Run();
    } catch (const Error &) {
      continue;
    }
    EXPECT_LE(a.stats.vertex_count, b.stats.vertex_count);
    EXPECT_EQ(Verified(a, r.scene_before), Verified(b, r.scene_before));
    std::set<std::pair<std::string, int>> keys;
    for (const GssVertex &v : exhaustive.vertices()) {
      EXPECT_TRUE(keys.insert({v.ItemText(), v.span_start}).second || v.is_sentinel());
      for (int s : v.successors) EXPECT_LT(exhaustive.vertices()[s].frontier, v.frontier);
    }
    for (const ParsedTree &t : a.trees) {
      EXPECT_TRUE(model.grammar.Derives(*t.tree));
      for (const NodePtr &e : Entities(t.tree)) {
        if (!e->IsReference() && !e->FindFeature(FeatureName::kReferenceId)) {
          EXPECT_FALSE(Ground(*e, r.scene_before, nullptr).empty()) << e->canonical();
        }
      }
    }
    ParseForest again = GssParser(chunks, model.grammar, model.lexicon, model.ellipsis,
                                  r.scene_before)
                            .Run();
    ASSERT_EQ(again.trees.size(), a.trees.size());
    for (size_t i = 0; i < a.trees.size(); ++i) {
      EXPECT_EQ(again.trees[i].tree->canonical(), a.trees[i].tree->canonical());
      EXPECT_EQ(again.trees[i].weight, a.trees[i].weight);
    }
  }
}

WorldModel FigureOneScene() {
  return WorldModel(8, {{kPrism, "magenta", 1, 3, 0},
                        {kPrism, "magenta", 5, 3, 0},
                        {kCube, "red", 7, 6, 0},
                        {kCube, "red", 2, 2, 0},
                        {kCube, "yellow", 7, 7, 0}});
}

TEST(GssParserTest, FigureOneModesAgree) {
  TreebankRecord record = testing::FigureOneRecord();
  record.scene_before = FigureOneScene();
  std::vector<TreebankRecord> training = GenerateCorpus(1, 500, "mixed");
  training.push_back(record);
  TrainedModel model = TrainedModel::Train(training);
  const std::vector<Chunk> chunks = testing::FigureFourChunks();
  ParseForest pruned =
      Parse(chunks, model.grammar, model.lexicon, model.ellipsis, record.scene_before);
  ParseForest exhaustive = Parse(chunks, model.grammar, model.lexicon, model.ellipsis,
                                 record.scene_before, {ParseMode::kExhaustive, {}});
  const auto verified = Verified(pruned, record.scene_before);
  EXPECT_EQ(verified, Verified(exhaustive, record.scene_before));
  EXPECT_TRUE(verified.count(record.gold->canonical()));
  EXPECT_LE(pruned.stats.vertex_count, exhaustive.stats.vertex_count);
  SelectionResult chosen = VerifyAndScore(pruned, record.scene_before);
  EXPECT_EQ(chosen.chosen.tree->canonical(), record.gold->canonical());
}

TEST(GssParserTest, AttachmentAmbiguityInExhaustiveMode) {
  const TrainedModel &model = MixedModel();
  const std::vector<std::string> tokens =
      Tokenize("move the red block on top of the blue cube on the yellow one");
  WorldModel scene(8, {{kCube, "red", 1, 1, 0},
                       {kCube, "blue", 1, 1, 1},
                       {kCube, "yellow", 4, 4, 0},
                       {kCube, "red", 5, 5, 0},
                       {kCube, "blue", 6, 6, 0}});
  const std::vector<Chunk> chunks = ExtractChunks(tokens, model.hmm.Tag(tokens));
  ParseForest forest = Parse(chunks, model.grammar, model.lexicon, model.ellipsis, scene,
                             {ParseMode::kExhaustive, {}});
  EXPECT_GE(forest.trees.size(), 2u);
}

}  // namespace
}  // namespace rcparse
