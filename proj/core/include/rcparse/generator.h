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

#ifndef RCPARSE_GENERATOR_H_
#define RCPARSE_GENERATOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "rcparse/treebank.h"

namespace rcparse {

// Mix of command templates and description styles of a synthetic corpus.
struct GeneratorProfile {
  std::string name;
  // Template weights.
  int take = 0;
  int move_on = 0;
  int take_put_it = 0;     // "pick up X and put it on Y"
  int take_place_on = 0;   // "pick up X and place on Y" (elliptical 'it')
  int move_measure = 0;    // "move X two squares left of Y"
  int move_one = 0;        // "move the red cube on the yellow one"
  int figure_one = 0;      // "pick up left purple prism and place on red cube one
                           //  place in front of the one in the back right corner"
  // Entity description weights.
  int bare_type = 0;
  int color_type = 0;
  int indicator = 0;
  int relation = 0;
  // Maximum nesting of relation modifiers inside one description.
  int max_relation_depth = 1;
  // Probability of realizing a cyan shape as 'blue'.
  double blue_for_cyan = 0;
  int min_shapes = 6;
  int max_shapes = 14;
};

// Known profiles: simple, standard, ambiguity, relation-heavy, mixed.
const std::vector<std::string> &GeneratorProfileNames();
// Throws Error(kInvalidArgument) for an unknown name.
GeneratorProfile GetGeneratorProfile(const std::string &name);

struct GeneratorOptions {
  // Keep only records whose gold command is recovered, without a tie, by
  // the reference pipeline (a model trained on the candidates, fed gold
  // chunks). Disable to obtain raw template output.
  bool filter_unresolved = true;
};

// Deterministic in (seed, count, profile). Every record satisfies the
// treebank inclusion rule. Throws Error(kInvalidArgument) for count < 1.
std::vector<TreebankRecord> GenerateCorpus(std::uint64_t seed, int count,
                                           const GeneratorProfile &profile,
                                           const GeneratorOptions &options = {});
std::vector<TreebankRecord> GenerateCorpus(std::uint64_t seed, int count,
                                           const std::string &profile,
                                           const GeneratorOptions &options = {});

}  // namespace rcparse

#endif  // RCPARSE_GENERATOR_H_
