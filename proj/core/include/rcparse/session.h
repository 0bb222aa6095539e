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

#ifndef RCPARSE_SESSION_H_
#define RCPARSE_SESSION_H_

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rcparse/errors.h"
#include "rcparse/pipeline.h"
#include "rcparse/planner.h"
#include "rcparse/world.h"

namespace rcparse {

// Response category of a failed command, for the UI.
const char *ErrorCategoryName(ErrorCode code);

nlohmann::json GroundingToJson(const Grounding &grounding);

struct EntityGroundings {
  std::string entity;  // canonical LOSR text
  std::vector<Grounding> groundings;
};

struct CommandResponse {
  std::vector<Chunk> chunks;
  // Verified parses, best first.
  std::vector<ScoredParse> parses;
  std::string chosen;
  double score = 0;
  bool tie = false;
  std::vector<EntityGroundings> groundings;
  WorldModel scene;

  nlohmann::json ToJson() const;
};

// A failed command. For ambiguous commands `candidates` holds the
// groundings the planner could not choose between.
class CommandError : public Error {
 public:
  CommandError(ErrorCode code, const std::string &message,
               std::vector<Grounding> candidates = {})
      : Error(code, message), candidates_(std::move(candidates)) {}
  const std::vector<Grounding> &candidates() const { return candidates_; }
  nlohmann::json ToJson() const;

 private:
  std::vector<Grounding> candidates_;
};

// Runs one command against a scene without committing anything. Throws
// CommandError.
CommandResponse InterpretCommand(const TrainedModel &model, const std::string &text,
                                 const WorldModel &world);

struct HistoryEntry {
  std::string command;
  std::string losr;
  WorldModel before;
};

// An interactive session: a current scene plus the commands applied to it.
class Session {
 public:
  Session(std::string id, WorldModel initial);

  const std::string &id() const { return id_; }
  WorldModel scene() const;
  std::vector<HistoryEntry> history() const;
  CommandResponse Command(const TrainedModel &model, const std::string &text);
  WorldModel Reset();
  // Throws Error(kEmptyHistory).
  WorldModel Undo();
  std::chrono::steady_clock::time_point last_used() const;

 private:
  void Touch();
  // Replays the history from the initial scene; throws on divergence.
  void CheckReplay() const;

  const std::string id_;
  const WorldModel initial_;
  mutable std::mutex mutex_;
  WorldModel world_;
  std::vector<HistoryEntry> history_;
  std::chrono::steady_clock::time_point last_used_;
};

// In-memory sessions with idle expiry. Thread-safe; commands within one
// session are serialized.
class SessionManager {
 public:
  SessionManager(std::shared_ptr<const TrainedModel> model, WorldModel default_scene,
                 std::chrono::seconds idle_timeout = std::chrono::hours(1));

  std::shared_ptr<Session> Create(std::optional<WorldModel> scene = std::nullopt);
  // Throws Error(kUnknownSession).
  std::shared_ptr<Session> Get(const std::string &id);
  const TrainedModel &model() const { return *model_; }
  int size() const;
  void ExpireIdle();

 private:
  std::string NewId();

  std::shared_ptr<const TrainedModel> model_;
  WorldModel default_scene_;
  std::chrono::seconds idle_timeout_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t salt_;
};

}  // namespace rcparse

#endif  // RCPARSE_SESSION_H_
