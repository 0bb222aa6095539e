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

#include "rcparse/session.h"

#include <cstdio>
#include <random>

#include "rcparse/postprocess.h"

namespace rcparse {
namespace {

nlohmann::json ShapeToJson(const Shape &s) {
  return {{"type", ShapeTypeString(s.type)},
          {"color", s.color},
          {"x", s.x},
          {"y", s.y},
          {"z", s.z}};
}

// Entities of each event grounded in the scene the event starts from.
std::vector<EntityGroundings> GroundEntities(const LosrNode &root, const WorldModel &world,
                                             const ExecutionTrace &trace) {
  std::vector<NodePtr> events;
  if (root.label() == Label::kSequence) {
    events = root.children();
  } else {
    events.push_back(std::make_shared<const LosrNode>(root));
  }
  std::vector<EntityGroundings> out;
  WorldModel current = world;
  for (size_t i = 0; i < events.size(); ++i) {
    for (const NodePtr &entity : Entities(events[i])) {
      EntityGroundings g{entity->canonical(), {}};
      try {
        g.groundings = Ground(*entity, current, &trace.bindings);
      } catch (const Error &) {
      }
      if (g.groundings.empty() && entity == events[i]->children().front()) {
        g.groundings = {trace.plans[i].theme};
      }
      out.push_back(std::move(g));
    }
    current = ExecutePlan(current, trace.plans[i]);
  }
  return out;
}

// Theme candidates of an ambiguous single-parse failure, for highlighting.
std::vector<Grounding> AmbiguousCandidates(const std::vector<ScoredParse> &scored,
                                           const WorldModel &world) {
  std::vector<Grounding> out;
  for (const ScoredParse &s : scored) {
    NodePtr event = s.tree;
    if (event->label() == Label::kSequence) event = event->children().front();
    for (const NodePtr &child : event->children()) {
      if (child->label() != Label::kEntity) continue;
      try {
        for (Grounding &g : Ground(*child, world, nullptr)) out.push_back(std::move(g));
      } catch (const Error &) {
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

const char *ErrorCategoryName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOov: return "oov";
    case ErrorCode::kNoParse:
    case ErrorCode::kIllegalIob2: return "no-parse";
    case ErrorCode::kAllRejected:
    case ErrorCode::kEmptyForest: return "all-rejected";
    case ErrorCode::kAmbiguous: return "ambiguous";
    case ErrorCode::kUnknownSession:
    case ErrorCode::kEmptyHistory: return "session";
    case ErrorCode::kInvalidWorld:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse: return "request";
    default: return "other";
  }
}

nlohmann::json GroundingToJson(const Grounding &grounding) {
  nlohmann::json j;
  j["kind"] = GroundingKindString(grounding.kind);
  j["shapes"] = nlohmann::json::array();
  for (const Shape &s : grounding.shapes) j["shapes"].push_back(ShapeToJson(s));
  j["cells"] = nlohmann::json::array();
  for (const Cell &c : grounding.cells) j["cells"].push_back({c.x, c.y});
  if (grounding.held) {
    j["held"] = {{"type", ShapeTypeString(grounding.held->type)},
                 {"color", grounding.held->color}};
  } else {
    j["held"] = nullptr;
  }
  return j;
}

nlohmann::json CommandResponse::ToJson() const {
  nlohmann::json j;
  j["chunks"] = nlohmann::json::array();
  for (const Chunk &c : chunks) {
    j["chunks"].push_back({{"text", c.Text()},
                           {"feature", FeatureNameString(c.feature)},
                           {"span", {c.start, c.end}}});
  }
  j["parses"] = nlohmann::json::array();
  for (const ScoredParse &p : parses) {
    j["parses"].push_back({{"losr", p.tree->canonical()}, {"score", p.score}});
  }
  j["chosen"] = chosen;
  j["score"] = score;
  j["tie"] = tie;
  j["groundings"] = nlohmann::json::array();
  for (const EntityGroundings &g : groundings) {
    nlohmann::json list = nlohmann::json::array();
    for (const Grounding &x : g.groundings) list.push_back(GroundingToJson(x));
    j["groundings"].push_back({{"entity", g.entity}, {"groundings", list}});
  }
  j["scene"] = SceneToJson(scene);
  return j;
}

nlohmann::json CommandError::ToJson() const {
  nlohmann::json j = {{"code", ErrorCodeName(code())},
                      {"message", what()},
                      {"category", ErrorCategoryName(code())}};
  if (!candidates_.empty()) {
    j["candidates"] = nlohmann::json::array();
    for (const Grounding &g : candidates_) j["candidates"].push_back(GroundingToJson(g));
  }
  return j;
}

CommandResponse InterpretCommand(const TrainedModel &model, const std::string &text,
                                 const WorldModel &world) {
  const std::vector<std::string> tokens = Tokenize(text);
  if (tokens.empty()) throw CommandError(ErrorCode::kNoParse, "empty command");
  PipelineResult result = RunPipeline(model, tokens, world);
  if (!result.ok()) {
    ErrorCode code = *result.error;
    std::vector<Grounding> candidates;
    if (code == ErrorCode::kAllRejected) {
      bool all_ambiguous = !result.scored.empty();
      for (const ScoredParse &s : result.scored) {
        all_ambiguous &= s.rejection == ErrorCode::kAmbiguous;
      }
      if (all_ambiguous) {
        code = ErrorCode::kAmbiguous;
        candidates = AmbiguousCandidates(result.scored, world);
      }
    }
    throw CommandError(code, result.error_message, std::move(candidates));
  }
  CommandResponse response;
  response.chunks = result.chunks;
  response.parses = result.selection->ranked;
  const ScoredParse &chosen = result.selection->chosen;
  response.chosen = chosen.tree->canonical();
  response.score = chosen.score;
  response.tie = result.selection->tie;
  ExecutionTrace trace = TraceSequence(*chosen.tree, world);
  response.groundings = GroundEntities(*chosen.tree, world, trace);
  response.scene = trace.final_world;
  return response;
}

Session::Session(std::string id, WorldModel initial)
    : id_(std::move(id)),
      initial_(initial),
      world_(std::move(initial)),
      last_used_(std::chrono::steady_clock::now()) {}

void Session::Touch() { last_used_ = std::chrono::steady_clock::now(); }

WorldModel Session::scene() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return world_;
}

std::vector<HistoryEntry> Session::history() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return history_;
}

std::chrono::steady_clock::time_point Session::last_used() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return last_used_;
}

void Session::CheckReplay() const {
  WorldModel replay = initial_;
  for (const HistoryEntry &entry : history_) {
    replay = ExecuteSequence(*Deserialize(entry.losr), replay);
  }
  if (!ScenesEqual(replay, world_)) {
    throw Error(ErrorCode::kInvalidWorld, "session history does not replay to the scene");
  }
}

CommandResponse Session::Command(const TrainedModel &model, const std::string &text) {
  std::lock_guard<std::mutex> lock(mutex_);
  Touch();
  CommandResponse response = InterpretCommand(model, text, world_);
  history_.push_back({text, response.chosen, world_});
  world_ = response.scene;
  CheckReplay();
  return response;
}

WorldModel Session::Reset() {
  std::lock_guard<std::mutex> lock(mutex_);
  Touch();
  history_.clear();
  world_ = initial_;
  return world_;
}

WorldModel Session::Undo() {
  std::lock_guard<std::mutex> lock(mutex_);
  Touch();
  if (history_.empty()) throw Error(ErrorCode::kEmptyHistory, "nothing to undo");
  world_ = history_.back().before;
  history_.pop_back();
  CheckReplay();
  return world_;
}

SessionManager::SessionManager(std::shared_ptr<const TrainedModel> model,
                               WorldModel default_scene, std::chrono::seconds idle_timeout)
    : model_(std::move(model)),
      default_scene_(std::move(default_scene)),
      idle_timeout_(idle_timeout),
      salt_(std::random_device{}()) {}

std::string SessionManager::NewId() {
  std::mt19937_64 mix(salt_ + ++counter_);
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(mix()));
  return buffer;
}

std::shared_ptr<Session> SessionManager::Create(std::optional<WorldModel> scene) {
  WorldModel initial = scene ? *scene : default_scene_;
  auto problems = Validate(initial);
  if (!problems.empty()) throw Error(ErrorCode::kInvalidWorld, problems.front());
  ExpireIdle();
  std::lock_guard<std::mutex> lock(mutex_);
  std::string id;
  do {
    id = NewId();
  } while (sessions_.count(id));
  auto session = std::make_shared<Session>(id, std::move(initial));
  sessions_[id] = session;
  return session;
}

std::shared_ptr<Session> SessionManager::Get(const std::string &id) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kUnknownSession, "unknown session " + id);
  return it->second;
}

int SessionManager::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return static_cast<int>(sessions_.size());
}

void SessionManager::ExpireIdle() {
  const auto now = std::chrono::steady_clock::now();
  std::lock_guard<std::mutex> lock(mutex_);
  std::erase_if(sessions_, [&](const auto &entry) {
    return now - entry.second->last_used() > idle_timeout_;
  });
}

}  // namespace rcparse
