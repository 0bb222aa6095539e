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

#include "rcparse/pipeline.h"

#include <chrono>
#include <filesystem>
#include <fstream>

namespace rcparse {
namespace {

std::ofstream OpenForWrite(const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

std::ifstream OpenForRead(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return in;
}

double MillisecondsSince(std::chrono::steady_clock::time_point begin) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin)
      .count();
}

}  // namespace

TrainedModel TrainedModel::Train(const std::vector<TreebankRecord> &records) {
  TrainedModel model;
  model.hmm = TrainHmm(records);
  model.lexicon = Lexicon::Build(records);
  model.grammar = Grammar::Induce(records);
  model.ellipsis = EllipsisTable::Induce(records);
  return model;
}

void TrainedModel::Save(const std::string &directory) const {
  const std::filesystem::path dir(directory);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + directory + ": " + ec.message());
  auto hmm_out = OpenForWrite(dir / "hmm.txt");
  hmm.Save(hmm_out);
  auto lexicon_out = OpenForWrite(dir / "lexicon.txt");
  lexicon.Save(lexicon_out);
  auto grammar_out = OpenForWrite(dir / "grammar.txt");
  grammar.Save(grammar_out);
  auto ellipsis_out = OpenForWrite(dir / "ellipsis.txt");
  ellipsis.Save(ellipsis_out);
}

TrainedModel TrainedModel::Load(const std::string &directory) {
  const std::filesystem::path dir(directory);
  TrainedModel model;
  auto hmm_in = OpenForRead(dir / "hmm.txt");
  model.hmm = HmmModel::Load(hmm_in);
  auto lexicon_in = OpenForRead(dir / "lexicon.txt");
  model.lexicon = Lexicon::Load(lexicon_in);
  auto grammar_in = OpenForRead(dir / "grammar.txt");
  model.grammar = Grammar::Load(grammar_in);
  auto ellipsis_in = OpenForRead(dir / "ellipsis.txt");
  model.ellipsis = EllipsisTable::Load(ellipsis_in);
  return model;
}

NodePtr PipelineResult::chosen() const {
  return selection ? selection->chosen.tree : nullptr;
}

PipelineResult RunPipeline(const TrainedModel &model, const std::vector<std::string> &tokens,
                           const WorldModel &world, const PipelineOptions &options,
                           const std::vector<Chunk> *gold_chunks) {
  PipelineResult result;
  result.tokens = tokens;
  try {
    if (gold_chunks != nullptr) {
      result.chunks = *gold_chunks;
    } else {
      result.tags = model.hmm.Tag(tokens);
      result.chunks = ExtractChunks(tokens, result.tags);
    }
    auto begin = std::chrono::steady_clock::now();
    try {
      result.forest = Parse(result.chunks, model.grammar, model.lexicon, model.ellipsis,
                            world, {options.mode, options.ground});
    } catch (...) {
      result.parse_ms = MillisecondsSince(begin);
      throw;
    }
    result.parse_ms = MillisecondsSince(begin);
    begin = std::chrono::steady_clock::now();
    result.scored = ScoreForest(result.forest, world, options.ground);
    try {
      result.selection = SelectParse(result.scored, options.selection);
    } catch (...) {
      result.postprocess_ms = MillisecondsSince(begin);
      throw;
    }
    result.postprocess_ms = MillisecondsSince(begin);
  } catch (const Error &e) {
    result.error = e.code();
    result.error_message = e.what();
  }
  return result;
}

}  // namespace rcparse
