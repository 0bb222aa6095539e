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

#include "rcparse/evaluation.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "rcparse/errors.h"

namespace rcparse {
namespace {

std::uint64_t SentenceSeed(std::uint64_t seed, int record_id) {
  return seed ^ (static_cast<std::uint64_t>(record_id) * 0x9E3779B97F4A7C15ULL);
}

struct Outcome {
  bool correct = false;
  ErrorCategory category = ErrorCategory::kOther;
  TimingSample timing;
};

}  // namespace

const char *EvalModeString(EvalMode mode) {
  switch (mode) {
    case EvalMode::kDefault: return "default";
    case EvalMode::kWithoutScoring: return "without-scoring";
    case EvalMode::kRandom: return "random";
    case EvalMode::kGoldChunking: return "gold-chunking";
    case EvalMode::kExhaustive: return "exhaustive";
  }
  return "default";
}

std::optional<EvalMode> ParseEvalMode(std::string_view text) {
  for (int i = 0; i < kNumEvalModes; ++i) {
    if (text == EvalModeString(static_cast<EvalMode>(i))) return static_cast<EvalMode>(i);
  }
  return std::nullopt;
}

PipelineOptions OptionsForMode(EvalMode mode, std::uint64_t random_seed) {
  PipelineOptions options;
  if (mode == EvalMode::kExhaustive) options.mode = ParseMode::kExhaustive;
  if (mode == EvalMode::kWithoutScoring) options.selection.selection = Selection::kFirst;
  if (mode == EvalMode::kRandom) {
    options.selection.selection = Selection::kRandom;
    options.selection.seed = random_seed;
  }
  return options;
}

const char *ErrorCategoryString(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kChunker: return "chunker";
    case ErrorCategory::kOov: return "oov";
    case ErrorCategory::kAnaphora: return "anaphora";
    case ErrorCategory::kScoringOrTie: return "scoring-or-tie";
    case ErrorCategory::kOther: return "other";
  }
  return "other";
}

bool IsCorrect(const TreebankRecord &record, const PipelineResult &result) {
  return result.ok() && EqualsExact(*result.chosen(), *record.gold);
}

ErrorCategory ClassifyMisparse(const TreebankRecord &record, const PipelineResult &result) {
  if (!result.tags.empty() && result.chunks != GoldChunks(record)) {
    return ErrorCategory::kChunker;
  }
  if (result.error == ErrorCode::kOov) return ErrorCategory::kOov;
  const std::string gold = record.gold->canonical();
  const std::string gold_bare = StripIds(record.gold)->canonical();
  if (result.error == ErrorCode::kNoAntecedent) return ErrorCategory::kAnaphora;
  if (result.ok() && StripIds(result.chosen())->canonical() == gold_bare) {
    return ErrorCategory::kAnaphora;
  }
  if (result.error == ErrorCode::kNoUniqueParse) return ErrorCategory::kScoringOrTie;
  if (result.selection) {
    if (result.selection->tie) return ErrorCategory::kScoringOrTie;
    for (const ScoredParse &s : result.selection->ranked) {
      if (s.tree->canonical() == gold) return ErrorCategory::kScoringOrTie;
    }
  }
  return ErrorCategory::kOther;
}

std::string EvalReport::ToText() const {
  std::ostringstream out;
  char line[256];
  out << "records: " << records << "  folds: " << folds << "\n";
  std::snprintf(line, sizeof(line), "%-16s %9s %8s %6s %8s %5s %9s %15s %6s\n", "mode",
                "accuracy", "correct", "total", "chunker", "oov", "anaphora",
                "scoring-or-tie", "other");
  out << line;
  for (int m = 0; m < kNumEvalModes; ++m) {
    if (!evaluated[m]) continue;
    const ModeStats &s = modes[m];
    std::snprintf(line, sizeof(line), "%-16s %9.4f %8d %6d %8d %5d %9d %15d %6d\n",
                  EvalModeString(static_cast<EvalMode>(m)), s.accuracy(), s.correct, s.total,
                  s.errors[0], s.errors[1], s.errors[2], s.errors[3], s.errors[4]);
    out << line;
  }
  return out.str();
}

std::string EvalReport::TimingCsv() const {
  std::ostringstream out;
  out << "record_id,words,parse_ms,postprocess_ms\n";
  for (const TimingSample &t : timing) {
    out << t.record_id << ',' << t.words << ',' << t.parse_ms << ',' << t.postprocess_ms
        << '\n';
  }
  return out.str();
}

EvalReport CrossValidate(const std::vector<TreebankRecord> &records,
                         const EvalOptions &options) {
  const int k = options.folds;
  const int n = static_cast<int>(records.size());
  if (k < 2 || n < k) {
    throw Error(ErrorCode::kInvalidArgument,
                "cross-validation needs 2 <= folds <= records (" + std::to_string(k) + ", " +
                    std::to_string(n) + ")");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);
  for (int i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng() % static_cast<std::uint64_t>(i + 1)]);
  }

  EvalReport report;
  report.folds = k;
  report.records = n;
  for (EvalMode m : options.modes) report.evaluated[static_cast<int>(m)] = true;
  // outcomes[mode][record index]
  std::vector<std::vector<Outcome>> outcomes(kNumEvalModes, std::vector<Outcome>(n));
  const int threads = options.threads > 0
                          ? options.threads
                          : std::max(1u, std::thread::hardware_concurrency());

  for (int fold = 0; fold < k; ++fold) {
    std::vector<TreebankRecord> train;
    std::vector<int> test;
    for (int i = 0; i < n; ++i) {
      if (i % k == fold) {
        test.push_back(order[i]);
      } else {
        train.push_back(records[order[i]]);
      }
    }
    const TrainedModel model = TrainedModel::Train(train);
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int t; (t = next.fetch_add(1)) < static_cast<int>(test.size());) {
        const TreebankRecord &record = records[test[t]];
        const std::vector<Chunk> gold_chunks = GoldChunks(record);
        for (EvalMode mode : options.modes) {
          const PipelineOptions pipeline_options =
              OptionsForMode(mode, SentenceSeed(options.seed, record.id));
          PipelineResult result = RunPipeline(
              model, record.tokens, record.scene_before, pipeline_options,
              mode == EvalMode::kGoldChunking ? &gold_chunks : nullptr);
          Outcome &o = outcomes[static_cast<int>(mode)][test[t]];
          o.correct = IsCorrect(record, result);
          if (!o.correct) o.category = ClassifyMisparse(record, result);
          o.timing = {record.id, static_cast<int>(record.tokens.size()), result.parse_ms,
                      result.postprocess_ms};
        }
      }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();
  }

  for (EvalMode mode : options.modes) {
    ModeStats &stats = report.modes[static_cast<int>(mode)];
    for (const Outcome &o : outcomes[static_cast<int>(mode)]) {
      ++stats.total;
      if (o.correct) {
        ++stats.correct;
      } else {
        ++stats.errors[static_cast<int>(o.category)];
      }
    }
  }
  if (report.evaluated[static_cast<int>(EvalMode::kDefault)]) {
    for (const Outcome &o : outcomes[static_cast<int>(EvalMode::kDefault)]) {
      report.timing.push_back(o.timing);
    }
  }
  return report;
}

std::optional<double> LogLogSlope(const std::vector<std::pair<int, double>> &points) {
  std::vector<std::pair<double, double>> logs;
  for (const auto &[x, y] : points) {
    if (x > 0 && y > 0) logs.push_back({std::log(x), std::log(y)});
  }
  if (logs.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (const auto &[x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= logs.size();
  my /= logs.size();
  double sxy = 0, sxx = 0;
  for (const auto &[x, y] : logs) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

TimingProfile MeasureTiming(const std::vector<TreebankRecord> &records,
                            const TrainedModel &model, int repetitions) {
  TimingProfile profile;
  std::map<int, std::pair<double, int>> buckets;
  for (const TreebankRecord &record : records) {
    const std::vector<Chunk> chunks = GoldChunks(record);
    for (ParseMode mode : {ParseMode::kPruned, ParseMode::kExhaustive}) {
      PipelineOptions options;
      options.mode = mode;
      RunPipeline(model, record.tokens, record.scene_before, options, &chunks);
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < repetitions; ++r) {
        PipelineResult result =
            RunPipeline(model, record.tokens, record.scene_before, options, &chunks);
        best = std::min(best, result.parse_ms + result.postprocess_ms);
      }
      if (mode == ParseMode::kPruned) {
        profile.pruned_total_ms += best;
        auto &bucket = buckets[static_cast<int>(record.tokens.size())];
        bucket.first += best;
        bucket.second += 1;
      } else {
        profile.exhaustive_total_ms += best;
      }
    }
  }
  for (const auto &[words, sum] : buckets) {
    profile.buckets.push_back({words, sum.first / sum.second});
  }
  profile.slope = LogLogSlope(profile.buckets);
  return profile;
}

}  // namespace rcparse
