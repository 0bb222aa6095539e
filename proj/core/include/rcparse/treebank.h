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

#ifndef RCPARSE_TREEBANK_H_
#define RCPARSE_TREEBANK_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "rcparse/losr.h"
#include "rcparse/world.h"

namespace rcparse {

// Links a feature leaf (addressed by item indices from the root; the last
// index selects the feature within its element) to a token span.
struct AlignmentEntry {
  std::vector<int> path;
  int start = 0;  // inclusive
  int end = 0;    // exclusive

  friend bool operator==(const AlignmentEntry &, const AlignmentEntry &) = default;
};

struct TreebankRecord {
  int id = 0;
  std::vector<std::string> tokens;
  WorldModel scene_before;
  WorldModel scene_after;
  NodePtr gold;
  std::vector<AlignmentEntry> alignment;
};

// A feature leaf together with the tokens it is aligned to.
struct AlignedLeaf {
  Feature feature;
  int start = 0;
  int end = 0;
};

// Feature addressed by a path, or nullptr when the path does not lead to a
// feature.
const Feature *FeatureAtPath(const LosrNode &root, const std::vector<int> &path);

// Aligned leaves sorted by token position. Throws Error(kMalformedRecord)
// for bad paths or spans and Error(kOverlappingAlignment) for overlaps.
std::vector<AlignedLeaf> AlignedLeaves(const TreebankRecord &record);

// Treebank inclusion rule: the gold command executes on scene_before and
// yields scene_after. Throws the planner's error (index = event index) or
// Error(kMalformedRecord) when the scenes do not match.
void CheckInclusion(const TreebankRecord &record);

nlohmann::json RecordToJson(const TreebankRecord &record);
TreebankRecord RecordFromJson(const nlohmann::json &json);

// One JSON object per line. Loading rejects malformed records and records
// violating the inclusion rule, naming the line.
std::vector<TreebankRecord> LoadTreebank(const std::string &path);
std::vector<TreebankRecord> ReadTreebank(std::istream &in);
void SaveTreebank(const std::vector<TreebankRecord> &records,
                  const std::string &path);
void WriteTreebank(const std::vector<TreebankRecord> &records, std::ostream &out);

// Lowercased tokens of a sentence: splits on whitespace and strips
// punctuation other than hyphens.
std::vector<std::string> Tokenize(std::string_view text);

std::string JoinTokens(const std::vector<std::string> &tokens, int start, int end);

}  // namespace rcparse

#endif  // RCPARSE_TREEBANK_H_
