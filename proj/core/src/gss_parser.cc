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

#include "rcparse/gss_parser.h"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "rcparse/errors.h"

namespace rcparse {
namespace {

bool MergeSorted(const std::vector<int> &extra, std::vector<int> *into) {
  std::vector<int> merged;
  merged.reserve(into->size() + extra.size());
  std::set_union(into->begin(), into->end(), extra.begin(), extra.end(),
                 std::back_inserter(merged));
  if (merged.size() == into->size()) return false;
  *into = std::move(merged);
  return true;
}

const std::string &ItemKey(const Item &item, std::string *scratch) {
  if (const auto *f = std::get_if<Feature>(&item)) {
    *scratch = f->ToString();
    return *scratch;
  }
  return std::get<NodePtr>(item)->canonical();
}

}  // namespace

const char *ParseModeString(ParseMode mode) {
  return mode == ParseMode::kPruned ? "pruned" : "exhaustive";
}

std::optional<ParseMode> ParseParseMode(std::string_view text) {
  if (text == "pruned") return ParseMode::kPruned;
  if (text == "exhaustive") return ParseMode::kExhaustive;
  return std::nullopt;
}

std::string GssVertex::ItemText() const {
  if (is_sentinel()) return "BOTTOM";
  std::string scratch;
  return ItemKey(item, &scratch);
}

GssParser::GssParser(std::vector<Chunk> chunks, const Grammar &grammar,
                     const Lexicon &lexicon, const EllipsisTable &ellipsis,
                     const WorldModel &world, ParseOptions options)
    : chunks_(std::move(chunks)),
      grammar_(grammar),
      lexicon_(lexicon),
      ellipsis_(ellipsis),
      world_(world),
      options_(options) {
  GssVertex sentinel;
  sentinel.item = Feature{FeatureName::kId, "0"};
  vertices_.push_back(std::move(sentinel));
  frontier_ = {0};
}

int GssParser::NewFrontier() {
  packed_.clear();
  return ++frontier_index_;
}

void GssParser::Enqueue(int id) { reduce_queue_.push_back(id); }

void GssParser::Shift() {
  if (done()) throw Error(ErrorCode::kInvalidArgument, "shift with an empty queue");
  const int k = next_chunk_++;
  const Chunk &chunk = chunks_[k];
  const std::vector<LexicalValue> &values = lexicon_.Lookup(chunk);
  const FeatureName feature = TreeFeatureForChunk(chunk.feature);
  const int f = NewFrontier();
  std::vector<int> previous = frontier_;
  std::sort(previous.begin(), previous.end());
  frontier_.clear();
  reduce_queue_.clear();
  for (const LexicalValue &value : values) {
    GssVertex v;
    v.id = static_cast<int>(vertices_.size());
    v.item = Feature{feature, value.value};
    v.span_start = k;
    v.frontier = f;
    v.successors = previous;
    v.weight = value.weight;
    std::string scratch;
    packed_[{ItemKey(v.item, &scratch), k}] = v.id;
    frontier_.push_back(v.id);
    Enqueue(v.id);
    vertices_.push_back(std::move(v));
  }
  last_shifted_ = chunk.feature;
}

void GssParser::Reduce() {
  while (!reduce_queue_.empty()) {
    const int id = reduce_queue_.front();
    reduce_queue_.pop_front();
    ReduceVertex(id);
  }
}

void GssParser::ReduceVertex(int id) {
  if (id == 0) return;
  const Symbol last = Symbol::Of(vertices_[id].item);
  for (const Production *p : grammar_.EndingWith(last)) {
    std::vector<int> path = {id};
    MatchPaths(*p, static_cast<int>(p->rhs.size()) - 2, id, &path);
  }
}

void GssParser::MatchPaths(const Production &production, int rhs_index, int vertex,
                           std::vector<int> *path) {
  if (rhs_index < 0) {
    std::vector<int> ordered(path->rbegin(), path->rend());
    AddReduction(production, ordered);
    return;
  }
  // Copied: reductions may append vertices or merge edges while iterating.
  const std::vector<int> successors = vertices_[vertex].successors;
  for (int succ : successors) {
    if (succ == 0 || !(Symbol::Of(vertices_[succ].item) == production.rhs[rhs_index])) {
      continue;
    }
    path->push_back(succ);
    MatchPaths(production, rhs_index - 1, succ, path);
    path->pop_back();
  }
}

bool GssParser::Groundable(const LosrNode &entity) {
  auto [it, inserted] = groundable_.try_emplace(entity.canonical(), false);
  if (inserted) {
    try {
      it->second =
          !GroundCached(entity, world_, options_.ground, &ground_cache_).empty();
    } catch (const Error &) {
      it->second = false;
    }
  }
  return it->second;
}

void GssParser::AddReduction(const Production &production, const std::vector<int> &path) {
  ++stats_.reduction_attempts;
  std::vector<Item> items;
  items.reserve(path.size());
  double weight = 1;
  for (int id : path) {
    items.push_back(vertices_[id].item);
    weight *= vertices_[id].weight;
  }
  NodePtr node = LosrNode::Make(production.lhs, std::move(items));
  if (options_.mode == ParseMode::kPruned && node->label() == Label::kEntity &&
      !node->IsReference() && !Groundable(*node)) {
    ++stats_.pruned_entities;
    return;
  }
  const int span_start = vertices_[path.front()].span_start;
  const std::vector<int> successors = vertices_[path.front()].successors;
  auto key = std::make_pair(node->canonical(), span_start);
  if (auto it = packed_.find(key); it != packed_.end()) {
    if (MergeSorted(successors, &vertices_[it->second].successors)) Enqueue(it->second);
    return;
  }
  GssVertex v;
  v.id = static_cast<int>(vertices_.size());
  v.item = std::move(node);
  v.span_start = span_start;
  v.frontier = frontier_index_;
  v.successors = successors;
  v.weight = weight;
  packed_.emplace(std::move(key), v.id);
  frontier_.push_back(v.id);
  Enqueue(v.id);
  vertices_.push_back(std::move(v));
}

bool GssParser::AddEllipsis() {
  if (done() || !last_shifted_) return false;
  NodePtr tpl = ellipsis_.Find(*last_shifted_, chunks_[next_chunk_].feature);
  if (tpl == nullptr) return false;
  const int f = NewFrontier();
  GssVertex v;
  v.id = static_cast<int>(vertices_.size());
  v.item = tpl;
  v.span_start = next_chunk_;
  v.frontier = f;
  v.successors = frontier_;
  std::sort(v.successors.begin(), v.successors.end());
  v.elliptical = true;
  packed_[{tpl->canonical(), next_chunk_}] = v.id;
  frontier_ = {v.id};
  reduce_queue_ = {v.id};
  vertices_.push_back(std::move(v));
  return true;
}

std::vector<ParsedTree> GssParser::AcceptedParses() const {
  std::map<std::string, ParsedTree> accepted;
  for (int id : frontier_) {
    const GssVertex &v = vertices_[id];
    const auto *node = std::get_if<NodePtr>(&v.item);
    if (node == nullptr || v.span_start != 0) continue;
    const Label label = (*node)->label();
    if (label != Label::kEvent && label != Label::kSequence) continue;
    if (!std::binary_search(v.successors.begin(), v.successors.end(), 0)) continue;
    accepted.emplace((*node)->canonical(), ParsedTree{*node, v.weight});
  }
  std::vector<ParsedTree> out;
  out.reserve(accepted.size());
  for (auto &[text, tree] : accepted) out.push_back(std::move(tree));
  return out;
}

ParseForest GssParser::Run() {
  const auto begin = std::chrono::steady_clock::now();
  if (chunks_.empty()) throw Error(ErrorCode::kNoParse, "no chunks to parse");
  for (const Chunk &c : chunks_) lexicon_.Lookup(c);
  while (!done()) {
    Shift();
    Reduce();
    if (AddEllipsis()) Reduce();
  }
  ParseForest forest;
  forest.trees = AcceptedParses();
  stats_.vertex_count = static_cast<int>(vertices_.size()) - 1;
  stats_.elapsed_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - begin)
                          .count();
  forest.stats = stats_;
  if (forest.trees.empty()) {
    throw Error(ErrorCode::kNoParse, "no complete parse covers the sentence");
  }
  return forest;
}

std::string GssParser::Dump() const {
  std::ostringstream out;
  for (const GssVertex &v : vertices_) {
    out << v.id << '\t' << v.frontier << '\t' << v.span_start << '\t' << v.ItemText()
        << '\t';
    for (size_t i = 0; i < v.successors.size(); ++i) {
      out << (i ? "," : "") << v.successors[i];
    }
    out << '\n';
  }
  return out.str();
}

ParseForest Parse(const std::vector<Chunk> &chunks, const Grammar &grammar,
                  const Lexicon &lexicon, const EllipsisTable &ellipsis,
                  const WorldModel &world, const ParseOptions &options) {
  return GssParser(chunks, grammar, lexicon, ellipsis, world, options).Run();
}

}  // namespace rcparse
