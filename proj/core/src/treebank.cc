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

#include "rcparse/treebank.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "rcparse/errors.h"
#include "rcparse/planner.h"

namespace rcparse {

const Feature *FeatureAtPath(const LosrNode &root, const std::vector<int> &path) {
  const LosrNode *node = &root;
  for (size_t i = 0; i < path.size(); ++i) {
    const int index = path[i];
    if (index < 0 || index >= static_cast<int>(node->items().size())) return nullptr;
    const Item &item = node->items()[index];
    if (i + 1 == path.size()) return std::get_if<Feature>(&item);
    const auto *child = std::get_if<NodePtr>(&item);
    if (child == nullptr) return nullptr;
    node = child->get();
  }
  return nullptr;
}

std::vector<AlignedLeaf> AlignedLeaves(const TreebankRecord &record) {
  std::vector<AlignedLeaf> leaves;
  const int n = static_cast<int>(record.tokens.size());
  for (const AlignmentEntry &entry : record.alignment) {
    const Feature *f = FeatureAtPath(*record.gold, entry.path);
    if (f == nullptr) {
      throw Error(ErrorCode::kMalformedRecord, "alignment path does not address a feature");
    }
    if (entry.start < 0 || entry.end > n || entry.start >= entry.end) {
      throw Error(ErrorCode::kMalformedRecord, "alignment span out of range");
    }
    leaves.push_back({*f, entry.start, entry.end});
  }
  std::sort(leaves.begin(), leaves.end(),
            [](const AlignedLeaf &a, const AlignedLeaf &b) { return a.start < b.start; });
  for (size_t i = 1; i < leaves.size(); ++i) {
    if (leaves[i].start < leaves[i - 1].end) {
      throw Error(ErrorCode::kOverlappingAlignment,
                  "alignment spans overlap at token " + std::to_string(leaves[i].start));
    }
  }
  return leaves;
}

void CheckInclusion(const TreebankRecord &record) {
  WorldModel after = ExecuteSequence(*record.gold, record.scene_before);
  if (!ScenesEqual(after, record.scene_after)) {
    throw Error(ErrorCode::kMalformedRecord,
                "executing the gold command does not produce scene_after");
  }
}

nlohmann::json RecordToJson(const TreebankRecord &record) {
  nlohmann::json alignment = nlohmann::json::array();
  for (const AlignmentEntry &a : record.alignment) {
    alignment.push_back({{"path", a.path}, {"span", {a.start, a.end}}});
  }
  return {{"id", record.id},
          {"tokens", record.tokens},
          {"scene_before", SceneToJson(record.scene_before)},
          {"scene_after", SceneToJson(record.scene_after)},
          {"losr", record.gold->canonical()},
          {"alignment", std::move(alignment)}};
}

TreebankRecord RecordFromJson(const nlohmann::json &json) {
  TreebankRecord record;
  try {
    record.id = json.at("id").get<int>();
    record.tokens = json.at("tokens").get<std::vector<std::string>>();
    record.scene_before = SceneFromJson(json.at("scene_before"));
    record.scene_after = SceneFromJson(json.at("scene_after"));
    record.gold = Deserialize(json.at("losr").get<std::string>());
    for (const auto &a : json.at("alignment")) {
      auto span = a.at("span").get<std::vector<int>>();
      if (span.size() != 2) throw Error(ErrorCode::kMalformedRecord, "span needs two ints");
      record.alignment.push_back(
          {a.at("path").get<std::vector<int>>(), span[0], span[1]});
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kMalformedRecord, std::string("bad record: ") + e.what());
  }
  return record;
}

std::vector<TreebankRecord> ReadTreebank(std::istream &in) {
  std::vector<TreebankRecord> records;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_number) + ": ";
    try {
      TreebankRecord record = RecordFromJson(nlohmann::json::parse(line));
      AlignedLeaves(record);
      CheckInclusion(record);
      records.push_back(std::move(record));
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kMalformedRecord, where + e.what(), line_number);
    } catch (const Error &e) {
      throw Error(e.code(), where + e.what(), line_number);
    }
  }
  return records;
}

std::vector<TreebankRecord> LoadTreebank(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open treebank " + path);
  return ReadTreebank(in);
}

void WriteTreebank(const std::vector<TreebankRecord> &records, std::ostream &out) {
  for (const TreebankRecord &r : records) out << RecordToJson(r).dump() << "\n";
}

void SaveTreebank(const std::vector<TreebankRecord> &records,
                  const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write treebank " + path);
  WriteTreebank(records, out);
}

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '\'') {
      current.push_back(static_cast<char>(std::tolower(u)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string JoinTokens(const std::vector<std::string> &tokens, int start, int end) {
  std::string out;
  for (int i = start; i < end; ++i) {
    if (i > start) out.push_back(' ');
    for (char c : tokens[i]) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

}  // namespace rcparse
