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


// Acceptance checks. Prints one PASS/FAIL line per criterion. Exits nonzero
// unless the failing criteria are exactly those named by --expected-failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.h"
#include "rcparse/errors.h"
#include "rcparse/evaluation.h"
#include "rcparse/generator.h"
#include "rcparse/pipeline.h"
#include "rcparse/planner.h"

namespace rcparse {
namespace {

constexpr double kTimingSlopeMax = 1.3;
constexpr double kDefaultAccuracyMin = 0.90;
constexpr double kGoldChunkingAccuracyMin = 0.98;
constexpr double kForestSecondsMax = 60;

std::set<std::string> failed;

void Report(const char *name, bool pass, const std::string &detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) failed.insert(name);
}

template <typename... Args>
std::string Format(const char *format, Args... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), format, args...);
  return buffer;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const TrainedModel &MixedModel() {
  static const TrainedModel model = TrainedModel::Train(GenerateCorpus(1, 500, "mixed"));
  return model;
}

std::set<std::string> VerifiedParses(const TrainedModel &model, const std::vector<Chunk> &chunks,
                                     const WorldModel &world, ParseMode mode) {
  std::set<std::string> out;
  try {
    ParseForest forest = Parse(chunks, model.grammar, model.lexicon, model.ellipsis, world,
                               {mode, {}});
    for (const ScoredParse &s : ScoreForest(forest, world)) {
      if (s.verified) out.insert(s.tree->canonical());
    }
  } catch (const Error &) {
  }
  return out;
}

void ForestEquivalence() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<TreebankRecord> corpus = GenerateCorpus(2024, 500, "mixed");
  const TrainedModel model = TrainedModel::Train(corpus);
  int equal = 0;
  int nonempty = 0;
  for (const TreebankRecord &r : corpus) {
    const std::vector<Chunk> chunks = ExtractChunks(r.tokens, model.hmm.Tag(r.tokens));
    const auto pruned = VerifiedParses(model, chunks, r.scene_before, ParseMode::kPruned);
    const auto exhaustive = VerifiedParses(model, chunks, r.scene_before, ParseMode::kExhaustive);
    equal += pruned == exhaustive;
    nonempty += !pruned.empty();
  }
  const double seconds = Seconds(start);
  Report("forest-equivalence",
         equal == static_cast<int>(corpus.size()) && seconds < kForestSecondsMax,
         Format("%d/%zu equal verified sets (%d nonempty), %.1fs", equal, corpus.size(), nonempty,
                seconds));
}

void TableOneOrdering() {
  EvalOptions options;
  options.folds = 10;
  options.seed = 1;
  const EvalReport standard = CrossValidate(GenerateCorpus(7, 1000, "standard"), options);
  const EvalReport ambiguity = CrossValidate(GenerateCorpus(7, 1000, "ambiguity"), options);
  auto acc = [](const EvalReport &r, EvalMode m) { return r.stats(m).accuracy(); };
  auto ordered = [&](const EvalReport &r) {
    return acc(r, EvalMode::kWithoutScoring) <= acc(r, EvalMode::kRandom) &&
           acc(r, EvalMode::kRandom) <= acc(r, EvalMode::kDefault) &&
           acc(r, EvalMode::kDefault) <= acc(r, EvalMode::kGoldChunking);
  };
  auto row = [&](const EvalReport &r) {
    return Format("without-scoring %.4f random %.4f default %.4f gold-chunking %.4f",
                  acc(r, EvalMode::kWithoutScoring), acc(r, EvalMode::kRandom),
                  acc(r, EvalMode::kDefault), acc(r, EvalMode::kGoldChunking));
  };
  Report("table1-standard",
         ordered(standard) && acc(standard, EvalMode::kDefault) >= kDefaultAccuracyMin &&
             acc(standard, EvalMode::kGoldChunking) >= kGoldChunkingAccuracyMin,
         row(standard));
  Report("table1-ambiguity",
         ordered(ambiguity) &&
             acc(ambiguity, EvalMode::kWithoutScoring) < acc(ambiguity, EvalMode::kDefault),
         row(ambiguity));
}

void ViterbiOracle() {
  const std::vector<TreebankRecord> corpus = GenerateCorpus(1, 500, "mixed");
  const HmmModel &model = MixedModel().hmm;
  std::vector<std::string> vocabulary;
  for (const TreebankRecord &r : corpus) vocabulary.insert(vocabulary.end(), r.tokens.begin(), r.tokens.end());
  std::sort(vocabulary.begin(), vocabulary.end());
  vocabulary.erase(std::unique(vocabulary.begin(), vocabulary.end()), vocabulary.end());
  vocabulary.push_back("zyzzyva");
  std::mt19937_64 rng(8);
  int equal = 0;
  constexpr int kTrials = 200;
  for (int trial = 0; trial < kTrials; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    std::vector<std::string> tokens;
    for (int i = 0; i < n; ++i) tokens.push_back(vocabulary[rng() % vocabulary.size()]);
    equal += model.Tag(tokens) == testing::BruteForceTag(model, tokens);
  }
  Report("viterbi-oracle", equal == kTrials, Format("%d/%d equal", equal, kTrials));
}

void GroundingOracle() {
  std::mt19937_64 rng(2026);
  constexpr int kTrials = 2000;
  int equal = 0;
  int nonempty = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const WorldModel world = testing::RandomScene(&rng, 3 + trial % 6, 14);
    const NodePtr entity = testing::RandomEntity(&rng, 2);
    const std::vector<Grounding> got = Ground(*entity, world, nullptr);
    equal += got == testing::NaiveGround(*entity, world);
    nonempty += !got.empty();
  }
  Report("grounding-oracle", equal == kTrials,
         Format("%d/%d equal (%d nonempty)", equal, kTrials, nonempty));
}

void Timing() {
  const TrainedModel &model = MixedModel();
  std::vector<TreebankRecord> lengths;
  for (TreebankRecord &r : GenerateCorpus(11, 1000, "mixed")) {
    const int n = static_cast<int>(r.tokens.size());
    if (n >= 4 && n <= 24) lengths.push_back(std::move(r));
  }
  const TimingProfile by_length = MeasureTiming(lengths, model, 5);
  const TimingProfile relation = MeasureTiming(GenerateCorpus(11, 300, "relation-heavy"),
                                               TrainedModel::Train(GenerateCorpus(12, 500, "relation-heavy")), 5);
  std::map<int, std::pair<double, int>> vertices;
  for (const TreebankRecord &r : lengths) {
    const std::vector<Chunk> chunks = GoldChunks(r);
    const PipelineResult result = RunPipeline(model, r.tokens, r.scene_before, {}, &chunks);
    auto &[sum, count] = vertices[static_cast<int>(r.tokens.size())];
    sum += static_cast<double>(result.forest.stats.vertex_count);
    ++count;
  }
  std::vector<std::pair<int, double>> vertex_points;
  for (const auto &[n, entry] : vertices) vertex_points.emplace_back(n, entry.first / entry.second);
  const double slope = by_length.slope.value_or(1e9);
  Report("timing-slope", slope <= kTimingSlopeMax,
         Format("log-log slope %.3f over %zu sentences, %zu lengths; forest vertex slope %.3f",
                slope, lengths.size(), by_length.buckets.size(),
                LogLogSlope(vertex_points).value_or(0)));
  Report("timing-pruned-vs-exhaustive",
         relation.pruned_total_ms <= relation.exhaustive_total_ms,
         Format("pruned %.1fms exhaustive %.1fms ratio %.2f", relation.pruned_total_ms,
                relation.exhaustive_total_ms, relation.ratio()));
}

void FigureFour() {
  const std::vector<Chunk> got = ExtractChunks(testing::FigureOneTokens(),
                                               MixedModel().hmm.Tag(testing::FigureOneTokens()));
  const std::vector<Chunk> want = testing::FigureFourChunks();
  Report("figure4-chunks", got == want && want.size() == 16,
         Format("%zu chunks, expected %zu", got.size(), want.size()));
}

void FigureThree() {
  const std::string text = testing::FigureThreeText();
  const NodePtr tree = Deserialize(text);
  const bool round_trip = Serialize(*tree) == testing::SquashWhitespace(text);
  const WorldModel world(8, {{ShapeType::kCube, "white", 1, 1, 0},
                             {ShapeType::kPrism, "cyan", 1, 1, 1},
                             {ShapeType::kPrism, "cyan", 6, 0, 0},
                             {ShapeType::kCube, "green", 4, 5, 0},
                             {ShapeType::kCube, "blue", 4, 5, 1}});
  bool executed = false;
  try {
    const WorldModel after = ExecuteSequence(*tree, world);
    const auto top = after.Top({4, 5});
    executed = Validate(after).empty() && top &&
               *top == Shape{ShapeType::kPrism, "cyan", 4, 5, 2} &&
               after.ColumnHeight({1, 1}) == 1 && after.ColumnHeight({6, 0}) == 1;
  } catch (const Error &) {
  }
  Report("figure3-roundtrip-execution", round_trip && executed,
         Format("round-trip %s, execution %s", round_trip ? "ok" : "differs",
                executed ? "ok" : "wrong"));
}

void Inclusion() {
  int total = 0;
  int ok = 0;
  for (const std::string &profile : GeneratorProfileNames()) {
    for (bool filter : {true, false}) {
      GeneratorOptions options;
      options.filter_unresolved = filter;
      for (const TreebankRecord &r : GenerateCorpus(5, 300, profile, options)) {
        ++total;
        try {
          ok += ScenesEqual(ExecuteSequence(*r.gold, r.scene_before), r.scene_after);
        } catch (const Error &) {
        }
      }
    }
  }
  Report("inclusion", ok == total, Format("%d/%d records", ok, total));
}

void ErrorTaxonomy() {
  GeneratorOptions raw;
  raw.filter_unresolved = false;
  std::vector<TreebankRecord> corpus = GenerateCorpus(3, 600, "ambiguity", raw);
  int injected = 0;
  for (size_t i = 0; i < corpus.size(); i += 10) {
    for (const AlignedLeaf &leaf : AlignedLeaves(corpus[i])) {
      if (leaf.feature.name == FeatureName::kColor && leaf.end == leaf.start + 1) {
        corpus[i].tokens[leaf.start] = "zorp" + std::to_string(i);
        ++injected;
        break;
      }
    }
  }
  EvalOptions options;
  options.folds = 10;
  const EvalReport report = CrossValidate(corpus, options);
  bool partition = true;
  std::string detail;
  for (int m = 0; m < kNumEvalModes; ++m) {
    const ModeStats &s = report.modes[m];
    int sum = 0;
    for (int c : s.errors) sum += c;
    partition = partition && sum == s.misparses();
    detail += Format("%s %d/%d ", EvalModeString(static_cast<EvalMode>(m)), sum, s.misparses());
  }
  const ModeStats &def = report.stats(EvalMode::kDefault);
  const ModeStats &without = report.stats(EvalMode::kWithoutScoring);
  const int oov = def.errors[static_cast<int>(ErrorCategory::kOov)];
  const int ties = without.errors[static_cast<int>(ErrorCategory::kScoringOrTie)];
  detail += Format("(injected %d, oov %d, scoring-or-tie %d)", injected, oov, ties);
  Report("error-taxonomy", partition && oov > 0 && ties > 0, detail);
}

}  // namespace
}  // namespace rcparse

int main(int argc, char **argv) {
  using namespace rcparse;
  std::set<std::string> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expected-failure" && i + 1 < argc) {
      expected.insert(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--expected-failure NAME]...\n");
      return 2;
    }
  }
  ForestEquivalence();
  TableOneOrdering();
  ViterbiOracle();
  GroundingOracle();
  Timing();
  FigureFour();
  FigureThree();
  Inclusion();
  ErrorTaxonomy();
  std::printf("%zu failed\n", failed.size());
  for (const std::string &name : expected) {
    if (!failed.count(name)) std::printf("expected failure %s passed\n", name.c_str());
  }
  return failed == expected ? 0 : 1;
}
