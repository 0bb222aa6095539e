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

#ifndef RCPARSE_PIPELINE_H_
#define RCPARSE_PIPELINE_H_

#include <optional>
#include <string>
#include <vector>

#include "rcparse/chunker.h"
#include "rcparse/errors.h"
#include "rcparse/grammar.h"
#include "rcparse/gss_parser.h"
#include "rcparse/lexicon.h"
#include "rcparse/postprocess.h"
#include "rcparse/treebank.h"
#include "rcparse/world.h"

namespace rcparse {

// Everything induced from a training treebank.
struct TrainedModel {
  HmmModel hmm;
  Lexicon lexicon;
  Grammar grammar;
  EllipsisTable ellipsis;

  // Throws Error(kEmptyCorpus) for an empty treebank.
  static TrainedModel Train(const std::vector<TreebankRecord> &records);

  // A model directory holds hmm.txt, lexicon.txt, grammar.txt and
  // ellipsis.txt.
  void Save(const std::string &directory) const;
  static TrainedModel Load(const std::string &directory);
};

struct PipelineOptions {
  ParseMode mode = ParseMode::kPruned;
  SelectionOptions selection;
  GroundOptions ground;
};

// Outcome of chunking, parsing and post-processing one sentence. Failures
// are data: `error` holds the code of the first failing step.
struct PipelineResult {
  std::vector<std::string> tokens;
  TagSequence tags;
  std::vector<Chunk> chunks;
  ParseForest forest;
  std::vector<ScoredParse> scored;
  std::optional<SelectionResult> selection;
  std::optional<ErrorCode> error;
  std::string error_message;
  double parse_ms = 0;        // GSS parsing
  double postprocess_ms = 0;  // anaphora, verification, scoring

  bool ok() const { return !error.has_value(); }
  // Chosen tree, or nullptr on failure.
  NodePtr chosen() const;
};

// Runs tagger -> parser -> post-processing on `tokens` against `world`.
// With `gold_chunks` the tagger is bypassed.
PipelineResult RunPipeline(const TrainedModel &model, const std::vector<std::string> &tokens,
                           const WorldModel &world, const PipelineOptions &options = {},
                           const std::vector<Chunk> *gold_chunks = nullptr);

}  // namespace rcparse

#endif  // RCPARSE_PIPELINE_H_
