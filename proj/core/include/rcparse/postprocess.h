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

#ifndef RCPARSE_POSTPROCESS_H_
#define RCPARSE_POSTPROCESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcparse/errors.h"
#include "rcparse/gss_parser.h"
#include "rcparse/losr.h"
#include "rcparse/planner.h"
#include "rcparse/world.h"

namespace rcparse {

// Binds every unbound (type: reference) entity to an antecedent: the theme
// of the preceding take/move event when the anaphor is the theme of the
// next event, otherwise the nearest preceding non-anaphoric entity in
// pre-order. The antecedent receives a fresh (id: n) as its first item, the
// anaphor (reference-id: n) right after its type. Throws
// Error(kNoAntecedent).
NodePtr ResolveAnaphora(const NodePtr &tree);

struct ScoredParse {
  NodePtr tree;  // anaphora-resolved when resolution succeeded
  double score = 0;
  bool verified = false;
  // Why verification failed.
  std::optional<ErrorCode> rejection;
  std::string rejection_message;
};

enum class Selection { kScored, kRandom, kFirst };
const char *SelectionString(Selection selection);

struct SelectionOptions {
  Selection selection = Selection::kScored;
  std::uint64_t seed = 0;
};

struct SelectionResult {
  ScoredParse chosen;
  // Verified parses, best first (score descending, then canonical text).
  std::vector<ScoredParse> ranked;
  // The two best verified scores are equal.
  bool tie = false;
};

// Resolves anaphora and runs the planner over every tree of the forest.
// Never throws for individual trees; failures are recorded per parse.
std::vector<ScoredParse> ScoreForest(const ParseForest &forest, const WorldModel &world,
                                     const GroundOptions &options = {});

// Picks the parse to execute. Throws Error(kEmptyForest), Error(kAllRejected)
// or, for Selection::kFirst with several verified parses,
// Error(kNoUniqueParse).
SelectionResult SelectParse(const std::vector<ScoredParse> &scored,
                            const SelectionOptions &options = {});

// SelectParse(ScoreForest(...)).
SelectionResult VerifyAndScore(const ParseForest &forest, const WorldModel &world,
                               const SelectionOptions &options = {},
                               const GroundOptions &ground = {});

// Whether two scores count as equal: products of the same weights taken in
// different orders may differ in the last bits.
bool ScoresTie(double a, double b);

}  // namespace rcparse

#endif  // RCPARSE_POSTPROCESS_H_
