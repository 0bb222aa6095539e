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

#ifndef RCPARSE_GSS_PARSER_H_
#define RCPARSE_GSS_PARSER_H_

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rcparse/chunker.h"
#include "rcparse/grammar.h"
#include "rcparse/lexicon.h"
#include "rcparse/losr.h"
#include "rcparse/planner.h"
#include "rcparse/world.h"

namespace rcparse {

enum class ParseMode { kPruned, kExhaustive };
const char *ParseModeString(ParseMode mode);
std::optional<ParseMode> ParseParseMode(std::string_view text);

// A vertex of the graph-structured stack. Vertex 0 is the sentinel bottom
// vertex; it holds no item and sits alone in frontier 0.
struct GssVertex {
  int id = 0;
  Item item;
  int span_start = 0;  // index of the leftmost covered chunk
  int frontier = 0;
  std::vector<int> successors;  // sorted ids in earlier frontiers
  double weight = 1;            // product of the shifted values' weights
  bool elliptical = false;

  bool is_sentinel() const { return id == 0; }
  std::string ItemText() const;
};

struct ParseStats {
  int vertex_count = 0;
  int reduction_attempts = 0;
  int pruned_entities = 0;
  double elapsed_ms = 0;
};

struct ParsedTree {
  NodePtr tree;
  // Product of the weights of the values shifted into the tree.
  double weight = 1;
};

struct ParseForest {
  // Canonical text ascending.
  std::vector<ParsedTree> trees;
  ParseStats stats;
};

struct ParseOptions {
  ParseMode mode = ParseMode::kPruned;
  GroundOptions ground;
};

// Shift-reduce parser over a graph-structured stack. Each shift opens a
// frontier; reductions add vertices to the current frontier. In pruned mode
// candidate entities without groundings in the world are discarded.
class GssParser {
 public:
  GssParser(std::vector<Chunk> chunks, const Grammar &grammar, const Lexicon &lexicon,
            const EllipsisTable &ellipsis, const WorldModel &world,
            ParseOptions options = {});

  // Runs shift / reduce / optional ellipsis + reduce until the queue is
  // empty. Throws Error(kOov) or Error(kNoParse).
  ParseForest Run();

  // Individual steps, exposed for inspection.
  void Shift();
  void Reduce();
  bool AddEllipsis();
  std::vector<ParsedTree> AcceptedParses() const;

  bool done() const { return next_chunk_ >= static_cast<int>(chunks_.size()); }
  const std::vector<GssVertex> &vertices() const { return vertices_; }
  const std::vector<int> &frontier() const { return frontier_; }
  const ParseStats &stats() const { return stats_; }
  // One line per vertex: id, frontier, span start, item text, successors.
  std::string Dump() const;

 private:
  void Enqueue(int id);
  void ReduceVertex(int id);
  void MatchPaths(const Production &production, int rhs_index, int vertex,
                  std::vector<int> *path);
  void AddReduction(const Production &production, const std::vector<int> &path);
  bool Groundable(const LosrNode &entity);
  int NewFrontier();

  std::vector<Chunk> chunks_;
  const Grammar &grammar_;
  const Lexicon &lexicon_;
  const EllipsisTable &ellipsis_;
  const WorldModel &world_;
  ParseOptions options_;

  std::vector<GssVertex> vertices_;
  std::vector<int> frontier_;
  int frontier_index_ = 0;
  int next_chunk_ = 0;
  std::optional<FeatureName> last_shifted_;
  std::deque<int> reduce_queue_;
  // (canonical item text, span start) -> vertex id, for the current frontier.
  std::map<std::pair<std::string, int>, int> packed_;
  GroundingCache ground_cache_;
  std::map<std::string, bool> groundable_;
  ParseStats stats_;
};

// Parses a chunk sequence. Throws Error(kOov) when a chunk is not in the
// lexicon and Error(kNoParse) when no complete tree is accepted.
ParseForest Parse(const std::vector<Chunk> &chunks, const Grammar &grammar,
                  const Lexicon &lexicon, const EllipsisTable &ellipsis,
                  const WorldModel &world, const ParseOptions &options = {});

}  // namespace rcparse

#endif  // RCPARSE_GSS_PARSER_H_
