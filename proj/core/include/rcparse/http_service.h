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

#ifndef RCPARSE_HTTP_SERVICE_H_
#define RCPARSE_HTTP_SERVICE_H_

#include <string>

#include "httplib.h"
#include "rcparse/session.h"

namespace rcparse {

// Registers the session API on `server`:
//   POST /api/session {scene?}         -> {sessionId, scene}
//   GET  /api/session/{id}/scene       -> scene
//   POST /api/session/{id}/command     {text} -> command response
//   POST /api/session/{id}/reset       -> scene
//   POST /api/session/{id}/undo        -> scene
// Failures answer {code, message, category}. When `static_dir` is not
// empty its files are served at the root.
void RegisterRoutes(httplib::Server *server, SessionManager *sessions,
                    const std::string &static_dir = "");

}  // namespace rcparse

#endif  // RCPARSE_HTTP_SERVICE_H_
