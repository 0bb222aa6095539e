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

#ifndef RCPARSE_EVALUATION_H_
#define RCPARSE_EVALUATION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rcparse/pipeline.h"
#include "rcparse/treebank.h"

namespace rcparse {

// Pipeline configurations compared by cross-validation.
enum class EvalMode {
  kDefault,         // tagger chunks, pruned parsing, scored selection
  kWithoutScoring,  // several verified parses count as a failure
  kRandom,          // uniform choice among verified parses
  kGoldChunking,    // alignment-derived chunks instead of the tagger
  kExhaustive,      // no frontier pruning
};
inline constexpr int kNumEvalModes = 5;
const char *EvalModeString(EvalMode mode);
std::optional<EvalMode> ParseEvalMode(std::string_view text);
PipelineOptions OptionsForMode(EvalMode mode, std::uint64_t random_seed);

enum class ErrorCategory { kChunker, kOov, kAnaphora, kScoringOrTie, kOther };
inline constexpr int kNumErrorCategories = 5;
const char *ErrorCategoryString(ErrorCategory category);

// Assigns a misparse to exactly one category, checked in order: chunker
// (tagger chunks differ from the gold chunks), oov, anaphora (the tree is
// right up to ids or no antecedent was found), scoring-or-tie (the gold tree
// was verified but not chosen, or the best scores tie), other.
ErrorCategory ClassifyMisparse(const TreebankRecord &record, const PipelineResult &result);

struct ModeStats {
  int total = 0;
  int correct = 0;
  std::array<int, kNumErrorCategories> errors{};
  double accuracy() const { return total ? static_cast<double>(correct) / total : 0; }
  int misparses() const { return total - correct; }
};

struct TimingSample {
  int record_id = 0;
  int words = 0;
  double parse_ms = 0;
  double postprocess_ms = 0;
};

struct EvalReport {
  int folds = 0;
  int records = 0;
  std::array<ModeStats, kNumEvalModes> modes{};
  std::array<bool, kNumEvalModes> evaluated{};
  // Default-mode timings, one per sentence.
  std::vector<TimingSample> timing;

  const ModeStats &stats(EvalMode mode) const { return modes[static_cast<int>(mode)]; }
  std::string ToText() const;
  std::string TimingCsv() const;
};

struct EvalOptions {
  int folds = 10;
  std::uint64_t seed = 1;
  std::vector<EvalMode> modes = {EvalMode::kDefault, EvalMode::kWithoutScoring,
                                 EvalMode::kRandom, EvalMode::kGoldChunking,
                                 EvalMode::kExhaustive};
  int threads = 0;  // 0: hardware concurrency
};

// Seeded k-fold cross-validation. Throws Error(kInvalidArgument) unless
// 2 <= folds <= records.size().
EvalReport CrossValidate(const std::vector<TreebankRecord> &records,
                         const EvalOptions &options = {});

// Whether the pipeline output exactly matches the record's gold tree.
bool IsCorrect(const TreebankRecord &record, const PipelineResult &result);

struct TimingProfile {
  // (word count, mean pruned-mode milliseconds), ascending word count.
  std::vector<std::pair<int, double>> buckets;
  // Least-squares slope of log(time) against log(words); absent with fewer
  // than two buckets.
  std::optional<double> slope;
  double pruned_total_ms = 0;
  double exhaustive_total_ms = 0;
  double ratio() const {
    return pruned_total_ms > 0 ? exhaustive_total_ms / pruned_total_ms : 0;
  }
};

// Times parsing plus post-processing with gold chunks in both modes. Each
// sentence is run once untimed, then `repetitions` times; the fastest run
// counts.
TimingProfile MeasureTiming(const std::vector<TreebankRecord> &records,
                            const TrainedModel &model, int repetitions = 1);

std::optional<double> LogLogSlope(const std::vector<std::pair<int, double>> &points);

}  // namespace rcparse

#endif  // RCPARSE_EVALUATION_H_
