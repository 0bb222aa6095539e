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

#include "rcparse/postprocess.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace rcparse {
namespace {

struct EntityInfo {
  NodePtr node;
  // Pre-order index of the event owning the entity as its theme, or -1.
  int theme_of_event = -1;
};

struct Walk {
  std::vector<EntityInfo> entities;
  std::vector<std::string> event_actions;
  std::vector<int> event_theme;  // entity index of each event's theme or -1
  bool root_is_sequence = false;
};

void Collect(const NodePtr &node, Walk *walk) {
  int event = -1;
  if (node->label() == Label::kEvent) {
    event = static_cast<int>(walk->event_actions.size());
    const Feature *action = node->FindFeature(FeatureName::kAction);
    walk->event_actions.push_back(action ? action->value : "");
    walk->event_theme.push_back(-1);
  }
  for (const Item &item : node->items()) {
    const auto *child = std::get_if<NodePtr>(&item);
    if (child == nullptr) continue;
    if ((*child)->label() == Label::kEntity) {
      EntityInfo info{*child, -1};
      if (event >= 0 && walk->event_theme[event] < 0) {
        walk->event_theme[event] = static_cast<int>(walk->entities.size());
        info.theme_of_event = event;
      }
      walk->entities.push_back(info);
    }
    Collect(*child, walk);
  }
}

// Rebuilds the tree adding ids and reference-ids to the entities at the
// given pre-order indices.
NodePtr Annotate(const NodePtr &node, const std::map<int, int> &ids,
                 const std::map<int, int> &reference_ids, int *entity_index) {
  std::vector<Item> items;
  items.reserve(node->items().size() + 1);
  bool changed = false;
  for (const Item &item : node->items()) {
    const auto *child = std::get_if<NodePtr>(&item);
    if (child == nullptr) {
      items.push_back(item);
      continue;
    }
    NodePtr rebuilt = *child;
    if ((*child)->label() == Label::kEntity) {
      const int index = (*entity_index)++;
      rebuilt = Annotate(*child, ids, reference_ids, entity_index);
      std::vector<Item> entity_items = rebuilt->items();
      bool touched = false;
      if (auto it = ids.find(index); it != ids.end()) {
        entity_items.insert(entity_items.begin(),
                            Feature{FeatureName::kId, std::to_string(it->second)});
        touched = true;
      }
      if (auto it = reference_ids.find(index); it != reference_ids.end()) {
        auto pos = std::find_if(entity_items.begin(), entity_items.end(), [](const Item &i) {
          const auto *f = std::get_if<Feature>(&i);
          return f && f->name == FeatureName::kType && f->value == "reference";
        });
        entity_items.insert(pos + 1, Feature{FeatureName::kReferenceId,
                                             std::to_string(it->second)});
        touched = true;
      }
      if (touched) rebuilt = LosrNode::Make(Label::kEntity, std::move(entity_items));
    } else {
      rebuilt = Annotate(*child, ids, reference_ids, entity_index);
    }
    changed |= rebuilt != *child;
    items.emplace_back(std::move(rebuilt));
  }
  if (!changed) return node;
  return LosrNode::Make(node->label(), std::move(items));
}

}  // namespace

NodePtr ResolveAnaphora(const NodePtr &tree) {
  Walk walk;
  walk.root_is_sequence = tree->label() == Label::kSequence;
  Collect(tree, &walk);

  // Existing ids are kept; fresh ones continue after the largest.
  int next_id = 1;
  std::map<int, int> existing;
  for (int i = 0; i < static_cast<int>(walk.entities.size()); ++i) {
    if (const Feature *id = walk.entities[i].node->FindFeature(FeatureName::kId)) {
      existing[i] = id->IntValue();
      next_id = std::max(next_id, id->IntValue() + 1);
    }
  }
  std::map<int, int> ids, reference_ids;
  for (int i = 0; i < static_cast<int>(walk.entities.size()); ++i) {
    const LosrNode &entity = *walk.entities[i].node;
    if (!entity.IsReference() || entity.FindFeature(FeatureName::kReferenceId)) continue;
    int antecedent = -1;
    const int event = walk.entities[i].theme_of_event;
    if (walk.root_is_sequence && event > 0) {
      const std::string &action = walk.event_actions[event - 1];
      const int theme = walk.event_theme[event - 1];
      if ((action == "take" || action == "move") && theme >= 0 &&
          !walk.entities[theme].node->IsReference()) {
        antecedent = theme;
      }
    }
    if (antecedent < 0) {
      for (int j = i - 1; j >= 0; --j) {
        if (!walk.entities[j].node->IsReference()) {
          antecedent = j;
          break;
        }
      }
    }
    if (antecedent < 0) {
      throw Error(ErrorCode::kNoAntecedent, "anaphor without a preceding entity");
    }
    int id;
    if (auto it = existing.find(antecedent); it != existing.end()) {
      id = it->second;
    } else if (auto it2 = ids.find(antecedent); it2 != ids.end()) {
      id = it2->second;
    } else {
      id = next_id++;
      ids[antecedent] = id;
    }
    reference_ids[i] = id;
  }
  if (reference_ids.empty()) return tree;
  int entity_index = 0;
  return Annotate(tree, ids, reference_ids, &entity_index);
}

const char *SelectionString(Selection selection) {
  switch (selection) {
    case Selection::kScored: return "scored";
    case Selection::kRandom: return "random";
    case Selection::kFirst: return "first";
  }
  return "scored";
}

bool ScoresTie(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max(std::fabs(a), std::fabs(b));
}

std::vector<ScoredParse> ScoreForest(const ParseForest &forest, const WorldModel &world,
                                     const GroundOptions &options) {
  std::vector<ScoredParse> scored;
  scored.reserve(forest.trees.size());
  GroundingCache cache;
  for (const ParsedTree &parsed : forest.trees) {
    ScoredParse s;
    s.tree = parsed.tree;
    s.score = parsed.weight;
    try {
      s.tree = ResolveAnaphora(parsed.tree);
      TraceSequence(*s.tree, world, options, &cache);
      s.verified = true;
    } catch (const Error &e) {
      s.rejection = e.code();
      s.rejection_message = e.what();
    }
    scored.push_back(std::move(s));
  }
  return scored;
}

SelectionResult SelectParse(const std::vector<ScoredParse> &scored,
                            const SelectionOptions &options) {
  if (scored.empty()) throw Error(ErrorCode::kEmptyForest, "the parse forest is empty");
  SelectionResult result;
  for (const ScoredParse &s : scored) {
    if (s.verified) result.ranked.push_back(s);
  }
  if (result.ranked.empty()) {
    std::string reasons;
    for (const ScoredParse &s : scored) {
      if (!reasons.empty()) reasons += "; ";
      reasons += ErrorCodeName(*s.rejection);
    }
    throw Error(ErrorCode::kAllRejected, "every parse was rejected by the planner (" +
                                             reasons + ")");
  }
  std::sort(result.ranked.begin(), result.ranked.end(),
            [](const ScoredParse &a, const ScoredParse &b) {
              if (a.score != b.score && !ScoresTie(a.score, b.score)) {
                return a.score > b.score;
              }
              return a.tree->canonical() < b.tree->canonical();
            });
  result.tie = result.ranked.size() > 1 &&
               ScoresTie(result.ranked[0].score, result.ranked[1].score);
  switch (options.selection) {
    case Selection::kScored:
      result.chosen = result.ranked.front();
      break;
    case Selection::kRandom: {
      std::vector<const ScoredParse *> by_text;
      for (const ScoredParse &s : result.ranked) by_text.push_back(&s);
      std::sort(by_text.begin(), by_text.end(), [](const auto *a, const auto *b) {
        return a->tree->canonical() < b->tree->canonical();
      });
      std::mt19937_64 rng(options.seed);
      result.chosen = *by_text[rng() % by_text.size()];
      break;
    }
    case Selection::kFirst:
      if (result.ranked.size() > 1) {
        throw Error(ErrorCode::kNoUniqueParse,
                    std::to_string(result.ranked.size()) +
                        " verified parses and no scoring to choose among them");
      }
      result.chosen = result.ranked.front();
      break;
  }
  return result;
}

SelectionResult VerifyAndScore(const ParseForest &forest, const WorldModel &world,
                               const SelectionOptions &options,
                               const GroundOptions &ground) {
  return SelectParse(ScoreForest(forest, world, ground), options);
}

}  // namespace rcparse
