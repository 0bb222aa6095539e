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


#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "rcparse/errors.h"
#include "rcparse/evaluation.h"
#include "rcparse/generator.h"

namespace rcparse {
namespace {

std::string Dump(const std::vector<TreebankRecord> &records) {
  std::ostringstream out;
  WriteTreebank(records, out);
  return out.str();
}

TEST(GeneratorTest, MatchesGoldenOutput) {
  std::ifstream in(std::string(RCPARSE_TESTDATA) + "/simple_seed1.jsonl");
  ASSERT_TRUE(in);
  std::stringstream golden;
  golden << in.rdbuf();
  EXPECT_EQ(Dump(GenerateCorpus(1, 3, "simple")), golden.str());
}

TEST(GeneratorTest, SeedOneFirstRecord) {
  const TreebankRecord r = GenerateCorpus(1, 1, "simple").at(0);
  EXPECT_EQ(r.id, 1);
  EXPECT_EQ(JoinTokens(r.tokens, 0, static_cast<int>(r.tokens.size())), "pick up yellow block");
  EXPECT_EQ(r.gold->canonical(), "(event: (action: take) (entity: (color: yellow) (type: cube)))");
}

TEST(GeneratorTest, Deterministic) {
  for (const std::string &profile : GeneratorProfileNames()) {
    EXPECT_EQ(Dump(GenerateCorpus(42, 60, profile)), Dump(GenerateCorpus(42, 60, profile)));
  }
  EXPECT_NE(Dump(GenerateCorpus(1, 20, "standard")), Dump(GenerateCorpus(2, 20, "standard")));
}

TEST(GeneratorTest, InclusionInvariant) {
  GeneratorOptions raw;
  raw.filter_unresolved = false;
  for (const std::string &profile : GeneratorProfileNames()) {
    for (const GeneratorOptions &options : {GeneratorOptions{}, raw}) {
      const auto records = GenerateCorpus(5, 200, profile, options);
      ASSERT_EQ(records.size(), 200u);
      for (const TreebankRecord &r : records) {
        EXPECT_TRUE(Validate(r.scene_before).empty());
        EXPECT_NO_THROW(CheckInclusion(r)) << r.gold->canonical();
        EXPECT_NO_THROW(AlignedLeaves(r));
      }
    }
  }
}

TEST(GeneratorTest, ProfilesCoverTheirConstructions) {
  auto count = [](const std::vector<TreebankRecord> &records, const std::string &needle) {
    int n = 0;
    for (const auto &r : records) n += r.gold->canonical().find(needle) != std::string::npos;
    return n;
  };
  const auto mixed = GenerateCorpus(1, 400, "mixed");
  EXPECT_GT(count(mixed, "(reference-id:"), 0);
  EXPECT_GT(count(mixed, "(measure:"), 0);
  EXPECT_GT(count(mixed, "(sequence:"), 0);
  EXPECT_GT(count(mixed, "(type: stack)"), 0);
  const auto ambiguity = GenerateCorpus(1, 400, "ambiguity");
  int blue_for_cyan = 0;
  for (const auto &r : ambiguity) {
    for (const AlignedLeaf &leaf : AlignedLeaves(r)) {
      blue_for_cyan += leaf.feature.value == "cyan" &&
                       JoinTokens(r.tokens, leaf.start, leaf.end) == "blue";
    }
  }
  EXPECT_GT(blue_for_cyan, 0);
  EXPECT_THROW(GetGeneratorProfile("nope"), Error);
}

TEST(TreebankTest, RoundTrip) {
  const auto records = GenerateCorpus(9, 500, "mixed");
  std::stringstream buffer(Dump(records));
  const auto loaded = ReadTreebank(buffer);
  EXPECT_EQ(Dump(loaded), Dump(records));
  std::stringstream empty;
  EXPECT_TRUE(ReadTreebank(empty).empty());
}

TEST(TreebankTest, RejectsBadRecords) {
  std::stringstream malformed(Dump(GenerateCorpus(1, 2, "simple")) + "{\"id\": 3}\n");
  try {
    ReadTreebank(malformed);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedRecord);
    EXPECT_EQ(e.index(), 3);
  }
  TreebankRecord r = GenerateCorpus(1, 1, "simple")[0];
  r.scene_before = WorldModel();
  std::stringstream failing(Dump({r}));
  try {
    ReadTreebank(failing);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoGrounding);
    EXPECT_NE(std::string(e.what()).find("event 0"), std::string::npos) << e.what();
  }
}

TEST(EvaluationTest, SimpleCorpusIsSolved) {
  EvalOptions options;
  options.folds = 5;
  EvalReport report = CrossValidate(GenerateCorpus(1, 150, "simple"), options);
  EXPECT_EQ(report.records, 150);
  EXPECT_DOUBLE_EQ(report.stats(EvalMode::kGoldChunking).accuracy(), 1.0);
  EXPECT_EQ(report.timing.size(), 150u);
}

TEST(EvaluationTest, DeterministicAndPartitioned) {
  GeneratorOptions raw;
  raw.filter_unresolved = false;
  const auto records = GenerateCorpus(4, 200, "ambiguity", raw);
  EvalOptions options;
  options.folds = 4;
  options.seed = 3;
  EvalReport a = CrossValidate(records, options);
  options.threads = 1;
  EvalReport b = CrossValidate(records, options);
  EXPECT_EQ(a.ToText(), b.ToText());
  for (int m = 0; m < kNumEvalModes; ++m) {
    const ModeStats &s = a.modes[m];
    EXPECT_TRUE(a.evaluated[m]);
    EXPECT_EQ(s.total, 200);
    int sum = 0;
    for (int e : s.errors) sum += e;
    EXPECT_EQ(sum, s.misparses()) << EvalModeString(EvalMode(m));
  }
  EXPECT_EQ(a.stats(EvalMode::kDefault).correct, a.stats(EvalMode::kExhaustive).correct);
  const std::string text = a.ToText();
  for (const char *mode : {"default", "without-scoring", "random", "gold-chunking", "exhaustive"}) {
    EXPECT_NE(text.find(mode), std::string::npos);
  }
  EXPECT_EQ(a.TimingCsv().substr(0, a.TimingCsv().find('\n')),
            "record_id,words,parse_ms,postprocess_ms");
}

TEST(EvaluationTest, OovIsClassified) {
  auto records = GenerateCorpus(6, 120, "standard");
  for (size_t i = 0; i < records.size(); i += 4) {
    for (std::string &token : records[i].tokens) {
      if (token == "cube" || token == "block") token = "blorf";
    }
  }
  EvalOptions options;
  options.folds = 3;
  options.modes = {EvalMode::kGoldChunking};
  EvalReport report = CrossValidate(records, options);
  const ModeStats &s = report.stats(EvalMode::kGoldChunking);
  EXPECT_GT(s.errors[static_cast<int>(ErrorCategory::kOov)], 0);
  EXPECT_FALSE(report.evaluated[static_cast<int>(EvalMode::kDefault)]);
}

TEST(TimingTest, LogLogSlope) {
  EXPECT_NEAR(*LogLogSlope({{1, 2.0}, {2, 4.0}, {4, 8.0}}), 1.0, 1e-12);
  EXPECT_NEAR(*LogLogSlope({{2, 3.0}, {4, 12.0}, {8, 48.0}}), 2.0, 1e-12);
  EXPECT_FALSE(LogLogSlope({{3, 1.0}}));
  const auto records = GenerateCorpus(1, 40, "standard");
  const TrainedModel model = TrainedModel::Train(records);
  TimingProfile single = MeasureTiming({records[0]}, model);
  EXPECT_EQ(single.buckets.size(), 1u);
  EXPECT_FALSE(single.slope);
  TimingProfile all = MeasureTiming(records, model);
  EXPECT_GT(all.buckets.size(), 1u);
  EXPECT_GT(all.pruned_total_ms, 0);
}

}  // namespace
}  // namespace rcparse
