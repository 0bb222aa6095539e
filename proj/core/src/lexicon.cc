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

#include "rcparse/lexicon.h"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "rcparse/errors.h"

namespace rcparse {

Lexicon Lexicon::Build(const std::vector<TreebankRecord> &records) {
  Lexicon lexicon;
  for (const TreebankRecord &record : records) {
    for (const AlignedLeaf &leaf : AlignedLeaves(record)) {
      lexicon.Add(JoinTokens(record.tokens, leaf.start, leaf.end),
                  leaf.feature.ChunkFeature(), leaf.feature.value);
    }
  }
  return lexicon;
}

void Lexicon::Add(const std::string &phrase, FeatureName feature,
                  const std::string &value, double count) {
  if (count <= 0) throw Error(ErrorCode::kInvalidArgument, "lexicon counts must be positive");
  if (!IsValidValue(TreeFeatureForChunk(feature), value)) {
    throw Error(ErrorCode::kParse, "value '" + value + "' not in V(" +
                                       FeatureNameString(feature) + ")");
  }
  Key key{phrase, feature};
  counts_[key][value] += count;
  Rebuild(key);
}

void Lexicon::Rebuild(const Key &key) {
  const auto &counts = counts_.at(key);
  double total = 0;
  for (const auto &[value, count] : counts) total += count;
  std::vector<LexicalValue> values;
  for (const auto &[value, count] : counts) values.push_back({value, count / total});
  std::stable_sort(values.begin(), values.end(),
                   [](const LexicalValue &a, const LexicalValue &b) {
                     return a.weight > b.weight;
                   });
  entries_[key] = std::move(values);
}

const std::vector<LexicalValue> &Lexicon::Lookup(const std::string &phrase,
                                                 FeatureName feature) const {
  auto it = entries_.find({phrase, feature});
  if (it == entries_.end()) {
    throw Error(ErrorCode::kOov, "out of vocabulary: '" + phrase + "' as " +
                                     FeatureNameString(feature));
  }
  return it->second;
}

const std::vector<LexicalValue> &Lexicon::Lookup(const Chunk &chunk) const {
  return Lookup(chunk.Text(), chunk.feature);
}

bool Lexicon::Contains(const std::string &phrase, FeatureName feature) const {
  return entries_.count({phrase, feature}) > 0;
}

void Lexicon::Save(std::ostream &out) const {
  out << std::setprecision(17);
  for (const auto &[key, counts] : counts_) {
    for (const auto &[value, count] : counts) {
      out << key.first << '\t' << FeatureNameString(key.second) << '\t' << value
          << '\t' << count << '\n';
    }
  }
}

Lexicon Lexicon::Load(std::istream &in) {
  Lexicon lexicon;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream stream(line);
    for (std::string field; std::getline(stream, field, '\t');) fields.push_back(field);
    auto feature = fields.size() == 4 ? ParseFeatureName(fields[1]) : std::nullopt;
    if (!feature) {
      throw Error(ErrorCode::kParse,
                  "malformed lexicon line " + std::to_string(line_number), line_number);
    }
    lexicon.Add(fields[0], *feature, fields[2], std::stod(fields[3]));
  }
  return lexicon;
}

}  // namespace rcparse
