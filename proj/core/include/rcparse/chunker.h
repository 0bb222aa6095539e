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

#ifndef RCPARSE_CHUNKER_H_
#define RCPARSE_CHUNKER_H_

#include <array>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "rcparse/losr.h"
#include "rcparse/treebank.h"

namespace rcparse {

// IOB2 tag over the chunkable features. Tags are indexed in a fixed
// alphabet order: O, B-action, I-action, B-type, I-type, ..., B-reference,
// I-reference. The index order is also the decoder's tie-break order.
struct Iob2Tag {
  enum class Kind { kOutside, kBegin, kInside };
  Kind kind = Kind::kOutside;
  FeatureName feature = FeatureName::kAction;  // unused for O

  static constexpr int kNumTags = 1 + 2 * kNumChunkableFeatures;

  static Iob2Tag Outside() { return {}; }
  static Iob2Tag Begin(FeatureName f) { return {Kind::kBegin, f}; }
  static Iob2Tag Inside(FeatureName f) { return {Kind::kInside, f}; }
  static Iob2Tag FromIndex(int index);
  static std::optional<Iob2Tag> Parse(std::string_view text);

  int index() const;
  // "O", "B-ACTION", "I-RELATION", ...
  std::string ToString() const;

  friend bool operator==(const Iob2Tag &a, const Iob2Tag &b) {
    return a.index() == b.index();
  }
};

using TagSequence = std::vector<Iob2Tag>;

// Whether tag `next` may follow `prev` (nullopt = sentence start).
bool LegalIob2Transition(std::optional<Iob2Tag> prev, Iob2Tag next);
bool IsLegalIob2(const TagSequence &tags);

// A contiguous word sequence tagged with one chunk feature.
struct Chunk {
  std::vector<std::string> words;
  FeatureName feature = FeatureName::kAction;
  int start = 0;  // token span [start, end)
  int end = 0;

  // Lowercased words joined by single spaces.
  std::string Text() const;

  friend bool operator==(const Chunk &, const Chunk &) = default;
};

// Gold IOB2 tags from the record's alignment. Unaligned tokens are O.
TagSequence AlignedTreeToIob2(const TreebankRecord &record);

// Maximal B/I runs become chunks; O tokens are dropped. Throws
// Error(kIllegalIob2) for length mismatches or illegal sequences.
std::vector<Chunk> ExtractChunks(const std::vector<std::string> &tokens,
                                 const TagSequence &tags);

// ExtractChunks(tokens, AlignedTreeToIob2(record)).
std::vector<Chunk> GoldChunks(const TreebankRecord &record);

struct TaggedSentence {
  std::vector<std::string> words;
  TagSequence tags;
};

// Second-order HMM over IOB2 tags with special start and stop symbols.
// Transitions use deleted interpolation of unigram, bigram and trigram
// relative frequencies; emissions are relative frequencies with an unknown
// word entry per tag whose mass follows the tag's hapax legomena.
class HmmModel {
 public:
  // Context/state indices beyond the tag alphabet.
  static constexpr int kStart = Iob2Tag::kNumTags;
  static constexpr int kStop = Iob2Tag::kNumTags + 1;
  static constexpr int kNumStates = Iob2Tag::kNumTags + 2;

  // Throws Error(kEmptyCorpus) when no sentence is given.
  static HmmModel Train(const std::vector<TaggedSentence> &sentences);

  // P(next | prev2, prev1). prev2/prev1 may be kStart, next may be kStop.
  // Sums to one over next for every context.
  double TransitionProb(int prev2, int prev1, int next) const;
  // P(word | tag) for known words; P(<unk> | tag) for unknown ones.
  double EmissionProb(std::string_view word, int tag) const;
  double UnknownProb(int tag) const;
  bool IsKnownWord(std::string_view word) const;

  // Log-space decoder inputs. Transition log-probabilities include the IOB2
  // legality constraint (illegal transitions are -inf). With `fallback`,
  // zero emissions of known words are replaced by a scaled unknown-word
  // probability; Tag() uses it only if no finite path exists otherwise.
  double LogTransition(int prev2, int prev1, int next) const;
  double LogEmission(std::string_view word, int tag, bool fallback) const;

  // Viterbi decoding. Ties go to the sequence that is smallest when
  // compared from the last position backwards in tag alphabet order.
  TagSequence Tag(const std::vector<std::string> &tokens) const;

  // Relative frequency of a tag among tag tokens (stop symbols excluded).
  double TagFrequency(int tag) const;
  const std::array<double, 3> &lambdas() const { return lambdas_; }
  int NumSeenTags() const;

  void Save(std::ostream &out) const;
  static HmmModel Load(std::istream &in);
  void SaveFile(const std::string &path) const;
  static HmmModel LoadFile(const std::string &path);

 private:
  void Finalize();

  using Counts3 = std::array<std::array<std::array<double, kNumStates>, kNumStates>, kNumStates>;

  std::array<double, kNumStates> unigram_{};
  std::array<std::array<double, kNumStates>, kNumStates> bigram_{};
  Counts3 trigram_{};
  std::unordered_map<std::string, std::array<double, Iob2Tag::kNumTags>> emissions_;
  std::array<double, 3> lambdas_{};

  // Derived.
  std::array<double, Iob2Tag::kNumTags> tag_emission_total_{};
  std::array<double, Iob2Tag::kNumTags> hapax_{};
  Counts3 log_transition_{};
};

HmmModel TrainHmm(const std::vector<TreebankRecord> &records);

}  // namespace rcparse

#endif  // RCPARSE_CHUNKER_H_
