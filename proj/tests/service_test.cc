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


#include <gtest/gtest.h>

#include <thread>

#include "httplib.h"
#include "rcparse/errors.h"
#include "rcparse/generator.h"
#include "rcparse/http_service.h"
#include "rcparse/session.h"

namespace rcparse {
namespace {

constexpr ShapeType kCube = ShapeType::kCube;

std::shared_ptr<const TrainedModel> Model() {
  static const auto model = std::make_shared<const TrainedModel>(
      TrainedModel::Train(GenerateCorpus(1, 500, "mixed")));
  return model;
}

WorldModel OneRed() {
  return WorldModel(8, {{kCube, "red", 2, 2, 0}, {kCube, "blue", 5, 5, 0}, {kCube, "green", 0, 6, 0}});
}

WorldModel TwoRed() {
  return WorldModel(8, {{kCube, "red", 2, 2, 0}, {kCube, "red", 5, 5, 0}});
}

ErrorCode CodeOf(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::kUsage;
}

TEST(SessionTest, CommandUpdatesScene) {
  Session session("s", OneRed());
  CommandResponse r = session.Command(*Model(), "pick up the red cube");
  EXPECT_EQ(r.scene.gripper(), (ShapePayload{kCube, "red"}));
  EXPECT_EQ(r.chosen, "(event: (action: take) (entity: (color: red) (type: cube)))");
  EXPECT_TRUE(ScenesEqual(r.scene, ExecuteSequence(*Deserialize(r.chosen), OneRed())));
  EXPECT_TRUE(ScenesEqual(session.scene(), r.scene));
  ASSERT_EQ(r.groundings.size(), 1u);
  EXPECT_EQ(r.groundings[0].groundings, (std::vector<Grounding>{
                                            Grounding::OfShape({kCube, "red", 2, 2, 0})}));
  EXPECT_FALSE(r.chunks.empty());
  EXPECT_EQ(session.history().size(), 1u);
  nlohmann::json j = r.ToJson();
  EXPECT_EQ(j["scene"]["gripper"]["color"], "red");
  EXPECT_EQ(j["chosen"], r.chosen);
}

TEST(SessionTest, AmbiguousCommandLeavesSceneUnchanged) {
  Session session("s", TwoRed());
  try {
    session.Command(*Model(), "pick up the red cube");
    FAIL();
  } catch (const CommandError &e) {
    EXPECT_EQ(e.code(), ErrorCode::kAmbiguous);
    EXPECT_EQ(e.candidates().size(), 2u);
    EXPECT_EQ(e.ToJson()["category"], "ambiguous");
  }
  EXPECT_TRUE(ScenesEqual(session.scene(), TwoRed()));
  EXPECT_TRUE(session.history().empty());
}

TEST(SessionTest, ErrorCategories) {
  Session session("s", OneRed());
  EXPECT_EQ(CodeOf([&] { session.Command(*Model(), "pick up the flurbish cube"); }),
            ErrorCode::kOov);
  EXPECT_STREQ(ErrorCategoryName(ErrorCode::kOov), "oov");
  EXPECT_STREQ(ErrorCategoryName(ErrorCode::kNoParse), "no-parse");
  EXPECT_STREQ(ErrorCategoryName(ErrorCode::kAllRejected), "all-rejected");
  EXPECT_STREQ(ErrorCategoryName(ErrorCode::kAmbiguous), "ambiguous");
  const std::set<std::string> distinct = {
      ErrorCategoryName(ErrorCode::kOov), ErrorCategoryName(ErrorCode::kNoParse),
      ErrorCategoryName(ErrorCode::kAllRejected), ErrorCategoryName(ErrorCode::kAmbiguous)};
  EXPECT_EQ(distinct.size(), 4u);
  EXPECT_EQ(CodeOf([&] { session.Command(*Model(), "pick up the green prism"); }),
            ErrorCode::kNoParse);
  EXPECT_TRUE(ScenesEqual(session.scene(), OneRed()));
}

TEST(SessionTest, ResetAndUndo) {
  Session session("s", OneRed());
  EXPECT_EQ(CodeOf([&] { session.Undo(); }), ErrorCode::kEmptyHistory);
  session.Command(*Model(), "pick up the red cube");
  EXPECT_TRUE(ScenesEqual(session.Undo(), OneRed()));
  session.Command(*Model(), "pick up the red cube and put it on the blue cube");
  session.Command(*Model(), "pick up the green cube");
  EXPECT_EQ(session.history().size(), 2u);
  EXPECT_EQ(session.scene().ColumnHeight({5, 5}), 2);
  EXPECT_TRUE(ScenesEqual(session.Reset(), OneRed()));
  EXPECT_TRUE(session.history().empty());
}

TEST(SessionTest, ManagerLifecycle) {
  SessionManager manager(Model(), OneRed(), std::chrono::seconds(1));
  auto a = manager.Create();
  auto b = manager.Create(TwoRed());
  EXPECT_NE(a->id(), b->id());
  EXPECT_EQ(a->id().size(), 16u);
  EXPECT_EQ(manager.Get(a->id()), a);
  EXPECT_TRUE(ScenesEqual(b->scene(), TwoRed()));
  EXPECT_EQ(CodeOf([&] { manager.Get("ffff"); }), ErrorCode::kUnknownSession);
  std::this_thread::sleep_for(std::chrono::milliseconds(1100));
  manager.ExpireIdle();
  EXPECT_EQ(manager.size(), 0);
}

TEST(SessionTest, ConcurrentCommandsAreSerialized) {
  SessionManager manager(Model(), OneRed());
  auto session = manager.Create();
  std::vector<std::thread> threads;
  std::atomic<int> ok = 0;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      try {
        session->Command(*Model(), "pick up the red cube");
        ++ok;
      } catch (const Error &) {
      }
    });
  }
  for (auto &t : threads) t.join();
  EXPECT_EQ(ok.load(), 1);
  EXPECT_EQ(session->history().size(), 1u);
}

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    manager_ = std::make_unique<SessionManager>(Model(), OneRed());
    RegisterRoutes(&server_, manager_.get());
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  nlohmann::json Post(const std::string &path, const nlohmann::json &body, int expected) {
    auto res = client_->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expected) << res->body;
    return nlohmann::json::parse(res->body);
  }

  std::string NewSession(const nlohmann::json &body = nlohmann::json::object()) {
    return Post("/api/session", body, 200)["sessionId"];
  }

  httplib::Server server_;
  std::unique_ptr<SessionManager> manager_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(HttpTest, CommandRoundTrip) {
  const std::string id = NewSession();
  auto scene = client_->Get("/api/session/" + id + "/scene");
  ASSERT_TRUE(scene);
  EXPECT_EQ(scene->status, 200);
  EXPECT_TRUE(nlohmann::json::parse(scene->body)["gripper"].is_null());

  nlohmann::json r = Post("/api/session/" + id + "/command", {{"text", "pick up the red cube"}}, 200);
  EXPECT_EQ(r["scene"]["gripper"]["color"], "red");
  EXPECT_EQ(r["chosen"], "(event: (action: take) (entity: (color: red) (type: cube)))");
  EXPECT_FALSE(r["chunks"].empty());
  EXPECT_FALSE(r["parses"].empty());
  EXPECT_EQ(r["groundings"][0]["groundings"][0]["kind"], "shape");

  nlohmann::json undone = Post("/api/session/" + id + "/undo", nlohmann::json::object(), 200);
  EXPECT_TRUE(undone["gripper"].is_null());
  nlohmann::json err = Post("/api/session/" + id + "/undo", nlohmann::json::object(), 409);
  EXPECT_EQ(err["code"], "empty-history");
  Post("/api/session/" + id + "/command", {{"text", "pick up the red cube"}}, 200);
  nlohmann::json reset = Post("/api/session/" + id + "/reset", nlohmann::json::object(), 200);
  EXPECT_TRUE(ScenesEqual(SceneFromJson(reset), OneRed()));
}

TEST_F(HttpTest, ErrorBodies) {
  const std::string id = NewSession({{"scene", SceneToJson(TwoRed())}});
  nlohmann::json amb = Post("/api/session/" + id + "/command", {{"text", "pick up the red cube"}}, 422);
  EXPECT_EQ(amb["code"], "ambiguous");
  EXPECT_EQ(amb["category"], "ambiguous");
  EXPECT_EQ(amb["candidates"].size(), 2u);
  EXPECT_TRUE(amb.contains("message"));
  auto scene = client_->Get("/api/session/" + id + "/scene");
  EXPECT_TRUE(ScenesEqual(SceneFromJson(nlohmann::json::parse(scene->body)), TwoRed()));

  nlohmann::json oov = Post("/api/session/" + id + "/command", {{"text", "grab the zorp"}}, 422);
  EXPECT_EQ(oov["category"], "oov");
  nlohmann::json missing = Post("/api/session/" + id + "/command", {{"txt", "x"}}, 400);
  EXPECT_EQ(missing["category"], "request");
  nlohmann::json unknown = Post("/api/session/0123456789abcdef/command", {{"text", "x"}}, 404);
  EXPECT_EQ(unknown["code"], "unknown-session");
  auto bad = client_->Post("/api/session", "{not json", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
}

}  // namespace
}  // namespace rcparse
