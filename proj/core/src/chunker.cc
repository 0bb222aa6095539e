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

#include "rcparse/chunker.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "rcparse/errors.h"

namespace rcparse {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kUnknownFloor = 0.5;
constexpr double kFallbackScale = 1e-3;

std::string Upper(std::string s) {
  for (char &c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string StateName(int state) {
  if (state == HmmModel::kStart) return "START";
  if (state == HmmModel::kStop) return "STOP";
  return Iob2Tag::FromIndex(state).ToString();
}

int ParseStateName(const std::string &name) {
  if (name == "START") return HmmModel::kStart;
  if (name == "STOP") return HmmModel::kStop;
  auto tag = Iob2Tag::Parse(name);
  if (!tag) throw Error(ErrorCode::kParse, "unknown tag '" + name + "' in model file");
  return tag->index();
}

}  // namespace

Iob2Tag Iob2Tag::FromIndex(int index) {
  if (index == 0) return Outside();
  const auto f = static_cast<FeatureName>((index - 1) / 2);
  return (index - 1) % 2 == 0 ? Begin(f) : Inside(f);
}

std::optional<Iob2Tag> Iob2Tag::Parse(std::string_view text) {
  for (int i = 0; i < kNumTags; ++i) {
    Iob2Tag t = FromIndex(i);
    if (t.ToString() == text) return t;
  }
  return std::nullopt;
}

int Iob2Tag::index() const {
  if (kind == Kind::kOutside) return 0;
  return 1 + 2 * static_cast<int>(feature) + (kind == Kind::kInside ? 1 : 0);
}

std::string Iob2Tag::ToString() const {
  if (kind == Kind::kOutside) return "O";
  return std::string(kind == Kind::kBegin ? "B-" : "I-") +
         Upper(FeatureNameString(feature));
}

bool LegalIob2Transition(std::optional<Iob2Tag> prev, Iob2Tag next) {
  if (next.kind != Iob2Tag::Kind::kInside) return true;
  return prev && prev->kind != Iob2Tag::Kind::kOutside &&
         prev->feature == next.feature;
}

bool IsLegalIob2(const TagSequence &tags) {
  std::optional<Iob2Tag> prev;
  for (const Iob2Tag &t : tags) {
    if (!LegalIob2Transition(prev, t)) return false;
    prev = t;
  }
  return true;
}

std::string Chunk::Text() const {
  return JoinTokens(words, 0, static_cast<int>(words.size()));
}

TagSequence AlignedTreeToIob2(const TreebankRecord &record) {
  TagSequence tags(record.tokens.size(), Iob2Tag::Outside());
  for (const AlignedLeaf &leaf : AlignedLeaves(record)) {
    const FeatureName f = leaf.feature.ChunkFeature();
    if (!IsChunkable(f)) {
      throw Error(ErrorCode::kMalformedRecord,
                  std::string("feature '") + FeatureNameString(f) + "' cannot be aligned");
    }
    tags[leaf.start] = Iob2Tag::Begin(f);
    for (int i = leaf.start + 1; i < leaf.end; ++i) tags[i] = Iob2Tag::Inside(f);
  }
  return tags;
}

std::vector<Chunk> ExtractChunks(const std::vector<std::string> &tokens,
                                 const TagSequence &tags) {
  if (tokens.size() != tags.size()) {
    throw Error(ErrorCode::kIllegalIob2, "token and tag counts differ");
  }
  if (!IsLegalIob2(tags)) throw Error(ErrorCode::kIllegalIob2, "illegal IOB2 sequence");
  std::vector<Chunk> chunks;
  for (int i = 0; i < static_cast<int>(tags.size()); ++i) {
    const Iob2Tag &t = tags[i];
    if (t.kind == Iob2Tag::Kind::kBegin) {
      chunks.push_back({{tokens[i]}, t.feature, i, i + 1});
    } else if (t.kind == Iob2Tag::Kind::kInside) {
      chunks.back().words.push_back(tokens[i]);
      chunks.back().end = i + 1;
    }
  }
  return chunks;
}

std::vector<Chunk> GoldChunks(const TreebankRecord &record) {
  return ExtractChunks(record.tokens, AlignedTreeToIob2(record));
}

HmmModel HmmModel::Train(const std::vector<TaggedSentence> &sentences) {
  if (sentences.empty()) throw Error(ErrorCode::kEmptyCorpus, "no training sentences");
  HmmModel model;
  for (const TaggedSentence &s : sentences) {
    if (s.words.size() != s.tags.size()) {
      throw Error(ErrorCode::kIllegalIob2, "token and tag counts differ");
    }
    std::vector<int> z = {kStart, kStart};
    for (const Iob2Tag &t : s.tags) z.push_back(t.index());
    z.push_back(kStop);
    for (size_t i = 2; i < z.size(); ++i) {
      model.unigram_[z[i]] += 1;
      model.bigram_[z[i - 1]][z[i]] += 1;
      model.trigram_[z[i - 2]][z[i - 1]][z[i]] += 1;
    }
    for (size_t i = 0; i < s.words.size(); ++i) {
      std::string w = JoinTokens(s.words, static_cast<int>(i), static_cast<int>(i) + 1);
      auto &row = model.emissions_[w];
      row[s.tags[i].index()] += 1;
    }
  }

  // Deleted interpolation: each trigram votes, with its count, for the
  // order whose leave-one-out estimate is largest.
  double n = 0;
  for (double c : model.unigram_) n += c;
  std::array<double, kNumStates> context1{};
  for (int a = 0; a < kNumStates; ++a) {
    for (int b = 0; b < kNumStates; ++b) context1[a] += model.bigram_[a][b];
  }
  std::array<double, 3> votes{};
  for (int a = 0; a < kNumStates; ++a) {
    for (int b = 0; b < kNumStates; ++b) {
      double context2 = 0;
      for (int c = 0; c < kNumStates; ++c) context2 += model.trigram_[a][b][c];
      for (int c = 0; c < kNumStates; ++c) {
        const double f = model.trigram_[a][b][c];
        if (f <= 0) continue;
        const double c3 = context2 > 1 ? (f - 1) / (context2 - 1) : 0;
        const double c2 =
            context1[b] > 1 ? (model.bigram_[b][c] - 1) / (context1[b] - 1) : 0;
        const double c1 = n > 1 ? (model.unigram_[c] - 1) / (n - 1) : 0;
        if (c3 >= c2 && c3 >= c1) {
          votes[2] += f;
        } else if (c2 >= c1) {
          votes[1] += f;
        } else {
          votes[0] += f;
        }
      }
    }
  }
  const double total = votes[0] + votes[1] + votes[2];
  for (int i = 0; i < 3; ++i) model.lambdas_[i] = votes[i] / total;
  model.Finalize();
  return model;
}

void HmmModel::Finalize() {
  tag_emission_total_.fill(0);
  hapax_.fill(0);
  for (const auto &[word, row] : emissions_) {
    double total = 0;
    int only_tag = -1;
    for (int t = 0; t < Iob2Tag::kNumTags; ++t) {
      tag_emission_total_[t] += row[t];
      total += row[t];
      if (row[t] > 0) only_tag = t;
    }
    if (total == 1) hapax_[only_tag] += 1;
  }
  for (int a = 0; a < kNumStates; ++a) {
    for (int b = 0; b < kNumStates; ++b) {
      for (int c = 0; c < kNumStates; ++c) {
        double p = (a == kStop || b == kStop || c == kStart)
                       ? 0.0
                       : TransitionProb(a, b, c);
        bool legal = true;
        if (c < Iob2Tag::kNumTags) {
          std::optional<Iob2Tag> prev;
          if (b < Iob2Tag::kNumTags) prev = Iob2Tag::FromIndex(b);
          legal = LegalIob2Transition(prev, Iob2Tag::FromIndex(c));
        }
        log_transition_[a][b][c] = (legal && p > 0) ? std::log(p) : kNegInf;
      }
    }
  }
}

double HmmModel::TransitionProb(int prev2, int prev1, int next) const {
  double n = 0;
  for (double c : unigram_) n += c;
  double context1 = 0, context2 = 0;
  for (int c = 0; c < kNumStates; ++c) {
    context1 += bigram_[prev1][c];
    context2 += trigram_[prev2][prev1][c];
  }
  double weights[3] = {lambdas_[0], lambdas_[1] * (context1 > 0),
                       lambdas_[2] * (context2 > 0)};
  double sum = weights[0] + weights[1] + weights[2];
  if (sum <= 0) {
    // Every available order got zero weight: use the highest available one.
    weights[0] = weights[1] = weights[2] = 0;
    if (context2 > 0) {
      weights[2] = 1;
    } else if (context1 > 0) {
      weights[1] = 1;
    } else {
      weights[0] = 1;
    }
    sum = 1;
  }
  double p = weights[0] * (n > 0 ? unigram_[next] / n : 0);
  if (context1 > 0) p += weights[1] * bigram_[prev1][next] / context1;
  if (context2 > 0) p += weights[2] * trigram_[prev2][prev1][next] / context2;
  return p / sum;
}

double HmmModel::UnknownProb(int tag) const {
  const double h = hapax_[tag] + kUnknownFloor;
  return h / (tag_emission_total_[tag] + h);
}

bool HmmModel::IsKnownWord(std::string_view word) const {
  return emissions_.count(std::string(word)) > 0;
}

double HmmModel::EmissionProb(std::string_view word, int tag) const {
  auto it = emissions_.find(std::string(word));
  if (it == emissions_.end()) return UnknownProb(tag);
  return it->second[tag] / (tag_emission_total_[tag] + hapax_[tag] + kUnknownFloor);
}

double HmmModel::LogTransition(int prev2, int prev1, int next) const {
  return log_transition_[prev2][prev1][next];
}

double HmmModel::LogEmission(std::string_view word, int tag, bool fallback) const {
  double p = EmissionProb(word, tag);
  if (p <= 0 && fallback) p = UnknownProb(tag) * kFallbackScale;
  return p > 0 ? std::log(p) : kNegInf;
}

double HmmModel::TagFrequency(int tag) const {
  double n = 0;
  for (int t = 0; t < Iob2Tag::kNumTags; ++t) n += unigram_[t];
  return n > 0 ? unigram_[tag] / n : 0;
}

int HmmModel::NumSeenTags() const {
  int n = 0;
  for (int t = 0; t < Iob2Tag::kNumTags; ++t) n += unigram_[t] > 0;
  return n;
}

TagSequence HmmModel::Tag(const std::vector<std::string> &tokens) const {
  const int n = static_cast<int>(tokens.size());
  if (n == 0) return {};
  std::vector<std::string> words;
  words.reserve(n);
  for (int i = 0; i < n; ++i) words.push_back(JoinTokens(tokens, i, i + 1));

  constexpr int T = Iob2Tag::kNumTags;
  constexpr int P = T + 1;  // previous-tag slots: tags plus start
  for (bool fallback : {false, true}) {
    // delta[i][prev][cur] with prev in [0, P) (kStart mapped to T).
    std::vector<std::array<std::array<double, T>, P>> delta(n);
    std::vector<std::array<std::array<int, T>, P>> back(n);
    for (auto &d : delta) {
      for (auto &row : d) row.fill(kNegInf);
    }
    std::vector<std::array<double, T>> emit(n);
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < T; ++t) emit[i][t] = LogEmission(words[i], t, fallback);
    }
    for (int t = 0; t < T; ++t) {
      delta[0][T][t] = LogTransition(kStart, kStart, t) + emit[0][t];
    }
    for (int i = 1; i < n; ++i) {
      for (int p1 = 0; p1 < T; ++p1) {
        for (int t = 0; t < T; ++t) {
          double best = kNegInf;
          int arg = -1;
          for (int p0 = 0; p0 < P; ++p0) {
            const double prev = delta[i - 1][p0][p1];
            if (prev == kNegInf) continue;
            const int context = p0 == T ? kStart : p0;
            const double s = (prev + LogTransition(context, p1, t)) + emit[i][t];
            if (s > best) {
              best = s;
              arg = p0;
            }
          }
          delta[i][p1][t] = best;
          back[i][p1][t] = arg;
        }
      }
    }
    double best = kNegInf;
    int best_prev = -1, best_cur = -1;
    for (int t = 0; t < T; ++t) {
      for (int p = 0; p < P; ++p) {
        const double d = delta[n - 1][p][t];
        if (d == kNegInf) continue;
        const double s = d + LogTransition(p == T ? kStart : p, t, kStop);
        if (s > best) {
          best = s;
          best_prev = p;
          best_cur = t;
        }
      }
    }
    if (best == kNegInf) continue;
    std::vector<int> path(n);
    path[n - 1] = best_cur;
    int prev = best_prev;
    for (int i = n - 1; i >= 1; --i) {
      path[i - 1] = prev;
      prev = back[i][prev][path[i]];
    }
    TagSequence tags;
    tags.reserve(n);
    for (int t : path) tags.push_back(Iob2Tag::FromIndex(t));
    return tags;
  }
  // Unreachable for trained models: with the fallback every tag with a
  // non-zero transition emits every word.
  return TagSequence(n, Iob2Tag::Outside());
}

void HmmModel::Save(std::ostream &out) const {
  out << "rcparse-hmm 1\n";
  out << std::setprecision(17) << "lambda " << lambdas_[0] << " " << lambdas_[1]
      << " " << lambdas_[2] << "\n";
  for (int a = 0; a < kNumStates; ++a) {
    if (unigram_[a] > 0) out << "uni " << StateName(a) << " " << unigram_[a] << "\n";
  }
  for (int a = 0; a < kNumStates; ++a) {
    for (int b = 0; b < kNumStates; ++b) {
      if (bigram_[a][b] > 0) {
        out << "bi " << StateName(a) << " " << StateName(b) << " " << bigram_[a][b]
            << "\n";
      }
    }
  }
  for (int a = 0; a < kNumStates; ++a) {
    for (int b = 0; b < kNumStates; ++b) {
      for (int c = 0; c < kNumStates; ++c) {
        if (trigram_[a][b][c] > 0) {
          out << "tri " << StateName(a) << " " << StateName(b) << " "
              << StateName(c) << " " << trigram_[a][b][c] << "\n";
        }
      }
    }
  }
  std::map<std::string, std::array<double, Iob2Tag::kNumTags>> sorted(
      emissions_.begin(), emissions_.end());
  for (const auto &[word, row] : sorted) {
    for (int t = 0; t < Iob2Tag::kNumTags; ++t) {
      if (row[t] > 0) out << "emit " << StateName(t) << " " << word << " " << row[t] << "\n";
    }
  }
}

HmmModel HmmModel::Load(std::istream &in) {
  HmmModel model;
  std::string line;
  if (!std::getline(in, line) || line != "rcparse-hmm 1") {
    throw Error(ErrorCode::kParse, "not an rcparse HMM model (bad header)");
  }
  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    std::string a, b, c;
    double count = 0;
    if (kind == "lambda") {
      fields >> model.lambdas_[0] >> model.lambdas_[1] >> model.lambdas_[2];
    } else if (kind == "uni") {
      fields >> a >> count;
      model.unigram_[ParseStateName(a)] = count;
    } else if (kind == "bi") {
      fields >> a >> b >> count;
      model.bigram_[ParseStateName(a)][ParseStateName(b)] = count;
    } else if (kind == "tri") {
      fields >> a >> b >> c >> count;
      model.trigram_[ParseStateName(a)][ParseStateName(b)][ParseStateName(c)] = count;
    } else if (kind == "emit") {
      fields >> a >> b >> count;
      model.emissions_[b][ParseStateName(a)] = count;
    } else {
      throw Error(ErrorCode::kParse, "unknown model entry '" + kind + "'", line_number);
    }
    if (fields.fail()) {
      throw Error(ErrorCode::kParse,
                  "malformed model line " + std::to_string(line_number), line_number);
    }
  }
  model.Finalize();
  return model;
}

void HmmModel::SaveFile(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  Save(out);
}

HmmModel HmmModel::LoadFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return Load(in);
}

HmmModel TrainHmm(const std::vector<TreebankRecord> &records) {
  std::vector<TaggedSentence> sentences;
  sentences.reserve(records.size());
  for (const TreebankRecord &r : records) {
    sentences.push_back({r.tokens, AlignedTreeToIob2(r)});
  }
  return HmmModel::Train(sentences);
}

}  // namespace rcparse
