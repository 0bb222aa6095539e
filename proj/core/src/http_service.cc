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

#include "rcparse/http_service.h"

#include "json.hpp"

namespace rcparse {
namespace {

int StatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSession: return 404;
    case ErrorCode::kEmptyHistory: return 409;
    case ErrorCode::kParse:
    case ErrorCode::kInvalidWorld:
    case ErrorCode::kInvalidArgument: return 400;
    default: return 422;
  }
}

void Reply(httplib::Response &res, int status, const nlohmann::json &body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response &res, const Error &e) {
  nlohmann::json body = {{"code", ErrorCodeName(e.code())},
                         {"message", e.what()},
                         {"category", ErrorCategoryName(e.code())}};
  if (const auto *command = dynamic_cast<const CommandError *>(&e)) body = command->ToJson();
  Reply(res, StatusFor(e.code()), body);
}

// Runs a handler, turning library errors and malformed JSON into error
// bodies.
template <typename Handler>
httplib::Server::Handler Guarded(Handler handler) {
  return [handler](const httplib::Request &req, httplib::Response &res) {
    try {
      handler(req, res);
    } catch (const Error &e) {
      ReplyError(res, e);
    } catch (const nlohmann::json::exception &e) {
      ReplyError(res, Error(ErrorCode::kInvalidArgument, std::string("bad JSON: ") + e.what()));
    }
  };
}

nlohmann::json ParseBody(const httplib::Request &req) {
  if (req.body.empty()) return nlohmann::json::object();
  return nlohmann::json::parse(req.body);
}

}  // namespace

void RegisterRoutes(httplib::Server *server, SessionManager *sessions,
                    const std::string &static_dir) {
  server->Post("/api/session", Guarded([sessions](const httplib::Request &req,
                                                  httplib::Response &res) {
    nlohmann::json body = ParseBody(req);
    std::optional<WorldModel> scene;
    if (body.contains("scene") && !body["scene"].is_null()) {
      scene = SceneFromJson(body["scene"]);
    }
    auto session = sessions->Create(scene);
    Reply(res, 200, {{"sessionId", session->id()}, {"scene", SceneToJson(session->scene())}});
  }));
  server->Get(R"(/api/session/([0-9a-f]+)/scene)",
              Guarded([sessions](const httplib::Request &req, httplib::Response &res) {
                auto session = sessions->Get(req.matches[1]);
                Reply(res, 200, SceneToJson(session->scene()));
              }));
  server->Post(R"(/api/session/([0-9a-f]+)/command)",
               Guarded([sessions](const httplib::Request &req, httplib::Response &res) {
                 auto session = sessions->Get(req.matches[1]);
                 nlohmann::json body = ParseBody(req);
                 if (!body.contains("text") || !body["text"].is_string()) {
                   throw Error(ErrorCode::kInvalidArgument, "body needs a 'text' string");
                 }
                 CommandResponse response =
                     session->Command(sessions->model(), body["text"].get<std::string>());
                 Reply(res, 200, response.ToJson());
               }));
  server->Post(R"(/api/session/([0-9a-f]+)/reset)",
               Guarded([sessions](const httplib::Request &req, httplib::Response &res) {
                 Reply(res, 200, SceneToJson(sessions->Get(req.matches[1])->Reset()));
               }));
  server->Post(R"(/api/session/([0-9a-f]+)/undo)",
               Guarded([sessions](const httplib::Request &req, httplib::Response &res) {
                 Reply(res, 200, SceneToJson(sessions->Get(req.matches[1])->Undo()));
               }));
  if (!static_dir.empty()) server->set_mount_point("/", static_dir);
}

}  // namespace rcparse
