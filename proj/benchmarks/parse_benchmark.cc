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


// Throughput of the parsing pipeline on generated sentences.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "rcparse/chunker.h"
#include "rcparse/generator.h"
#include "rcparse/pipeline.h"

namespace rcparse {
namespace {

struct Fixture {
  TrainedModel model;
  std::vector<TreebankRecord> records;
};

const Fixture &Mixed() {
  static const Fixture *fixture = [] {
    auto *f = new Fixture{TrainedModel::Train(GenerateCorpus(1, 500, "mixed")),
                          GenerateCorpus(11, 200, "mixed")};
    return f;
  }();
  return *fixture;
}

void BM_Tag(benchmark::State &state) {
  const Fixture &f = Mixed();
  size_t i = 0;
  for (auto _ : state) {
    const TreebankRecord &r = f.records[i++ % f.records.size()];
    benchmark::DoNotOptimize(f.model.hmm.Tag(r.tokens));
  }
}
BENCHMARK(BM_Tag);

void BM_Pipeline(benchmark::State &state) {
  const Fixture &f = Mixed();
  PipelineOptions options;
  options.mode = state.range(0) ? ParseMode::kExhaustive : ParseMode::kPruned;
  size_t i = 0;
  for (auto _ : state) {
    const TreebankRecord &r = f.records[i++ % f.records.size()];
    const std::vector<Chunk> chunks = GoldChunks(r);
    benchmark::DoNotOptimize(RunPipeline(f.model, r.tokens, r.scene_before, options, &chunks));
  }
}
BENCHMARK(BM_Pipeline)->Arg(0)->Arg(1)->ArgName("exhaustive");

void BM_PipelineByLength(benchmark::State &state) {
  const Fixture &f = Mixed();
  std::vector<const TreebankRecord *> matching;
  for (const TreebankRecord &r : f.records) {
    if (static_cast<int64_t>(r.tokens.size()) == state.range(0)) matching.push_back(&r);
  }
  if (matching.empty()) {
    state.SkipWithError("no sentence of this length");
    return;
  }
  size_t i = 0;
  for (auto _ : state) {
    const TreebankRecord &r = *matching[i++ % matching.size()];
    const std::vector<Chunk> chunks = GoldChunks(r);
    benchmark::DoNotOptimize(RunPipeline(f.model, r.tokens, r.scene_before, {}, &chunks));
  }
}
BENCHMARK(BM_PipelineByLength)->DenseRange(4, 24, 4)->ArgName("words");

}  // namespace
}  // namespace rcparse

BENCHMARK_MAIN();
