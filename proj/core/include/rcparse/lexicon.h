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

#ifndef RCPARSE_LEXICON_H_
#define RCPARSE_LEXICON_H_

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rcparse/chunker.h"
#include "rcparse/losr.h"
#include "rcparse/treebank.h"

namespace rcparse {

// A candidate value of a chunk with its relative frequency.
struct LexicalValue {
  std::string value;
  double weight = 0;
  friend bool operator==(const LexicalValue &, const LexicalValue &) = default;
};

// Phrase lexicon L(w, f): maps a normalized word sequence and its chunk
// feature to the values it was aligned to in training, weighted by relative
// frequency. Entries are keyed by chunk features, so 'it' and 'one' live
// under the reference feature with the value 'reference'.
class Lexicon {
 public:
  using Key = std::pair<std::string, FeatureName>;

  static Lexicon Build(const std::vector<TreebankRecord> &records);

  // Adds `count` observations of (phrase, feature) -> value.
  void Add(const std::string &phrase, FeatureName feature, const std::string &value,
           double count = 1);

  // Values sorted by descending weight, then value name. Throws Error(kOov)
  // when the pair has no entry.
  const std::vector<LexicalValue> &Lookup(const std::string &phrase,
                                          FeatureName feature) const;
  const std::vector<LexicalValue> &Lookup(const Chunk &chunk) const;
  bool Contains(const std::string &phrase, FeatureName feature) const;

  int size() const { return static_cast<int>(counts_.size()); }
  const std::map<Key, std::map<std::string, double>> &counts() const { return counts_; }

  // One "phrase<TAB>feature<TAB>value<TAB>count" line per observation
  // class, sorted.
  void Save(std::ostream &out) const;
  static Lexicon Load(std::istream &in);

 private:
  void Rebuild(const Key &key);

  std::map<Key, std::map<std::string, double>> counts_;
  std::map<Key, std::vector<LexicalValue>> entries_;
};

}  // namespace rcparse

#endif  // RCPARSE_LEXICON_H_
