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

#include "rcparse/world.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "rcparse/errors.h"
#include "rcparse/losr.h"

namespace rcparse {
namespace {

std::string Describe(const Shape &s) {
  std::ostringstream out;
  out << s.color << " " << ShapeTypeString(s.type) << "@(" << s.x << "," << s.y
      << "," << s.z << ")";
  return out.str();
}

ShapePayload PayloadFromJson(const nlohmann::json &json) {
  auto type = ParseShapeType(json.at("type").get<std::string>());
  if (!type) {
    throw Error(ErrorCode::kInvalidWorld,
                "unknown shape type '" + json.at("type").get<std::string>() + "'");
  }
  std::string color = json.at("color").get<std::string>();
  if (!IsValidValue(FeatureName::kColor, color)) {
    throw Error(ErrorCode::kInvalidWorld, "unknown color '" + color + "'");
  }
  return {*type, color};
}

}  // namespace

const char *ShapeTypeString(ShapeType type) {
  return type == ShapeType::kCube ? "cube" : "prism";
}

std::optional<ShapeType> ParseShapeType(std::string_view text) {
  if (text == "cube") return ShapeType::kCube;
  if (text == "prism") return ShapeType::kPrism;
  return std::nullopt;
}

bool ShapeLess(const Shape &a, const Shape &b) {
  return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
}

WorldModel::WorldModel(int board_size) : board_size_(board_size) {}

WorldModel::WorldModel(int board_size, std::vector<Shape> shapes,
                       std::optional<ShapePayload> gripper)
    : board_size_(board_size),
      shapes_(std::move(shapes)),
      gripper_(std::move(gripper)) {
  std::sort(shapes_.begin(), shapes_.end(), ShapeLess);
}

bool WorldModel::InBounds(Cell cell) const {
  return cell.x >= 0 && cell.y >= 0 && cell.x < board_size_ &&
         cell.y < board_size_;
}

std::span<const Shape> WorldModel::Column(Cell cell) const {
  auto lo = std::lower_bound(
      shapes_.begin(), shapes_.end(), cell,
      [](const Shape &s, Cell c) { return std::tie(s.x, s.y) < std::tie(c.x, c.y); });
  auto hi = lo;
  while (hi != shapes_.end() && hi->x == cell.x && hi->y == cell.y) ++hi;
  return {lo, hi};
}

const Shape *WorldModel::Top(Cell cell) const {
  auto column = Column(cell);
  return column.empty() ? nullptr : &column.back();
}

std::vector<Cell> WorldModel::Cells() const {
  std::vector<Cell> cells;
  cells.reserve(board_size_ * board_size_);
  for (int y = 0; y < board_size_; ++y) {
    for (int x = 0; x < board_size_; ++x) cells.push_back({x, y});
  }
  return cells;
}

std::vector<Cell> WorldModel::OccupiedCells() const {
  std::vector<Cell> cells;
  for (const Shape &s : shapes_) {
    if (cells.empty() || cells.back() != s.cell()) cells.push_back(s.cell());
  }
  return cells;
}

std::vector<std::string> Validate(const WorldModel &world) {
  std::vector<std::string> violations;
  if (world.board_size() <= 0) violations.push_back("bounds: board size must be positive");
  std::set<std::tuple<int, int, int>> occupied;
  for (const Shape &s : world.shapes()) {
    if (!world.InBounds(s.cell()) || s.z < 0) {
      violations.push_back("bounds: " + Describe(s) + " is off the board");
    }
    if (!occupied.insert({s.x, s.y, s.z}).second) {
      violations.push_back("occupancy: two shapes at " + Describe(s));
    }
  }
  for (const Shape &s : world.shapes()) {
    if (s.z == 0) continue;
    const Shape *below = nullptr;
    for (const Shape &t : world.Column(s.cell())) {
      if (t.z == s.z - 1) below = &t;
    }
    if (below == nullptr) {
      violations.push_back("gravity: nothing below " + Describe(s));
    } else if (below->type != ShapeType::kCube) {
      violations.push_back("support: " + Describe(s) + " rests on " +
                           Describe(*below));
    }
  }
  return violations;
}

WorldModel PickUp(const WorldModel &world, Cell cell) {
  if (world.gripper()) {
    throw Error(ErrorCode::kGripperOccupied, "gripper already holds a shape");
  }
  if (!world.InBounds(cell)) {
    throw Error(ErrorCode::kOffBoardCell, "cell is off the board");
  }
  const Shape *top = world.Top(cell);
  if (top == nullptr) {
    throw Error(ErrorCode::kEmptyColumn, "no shape to pick up at (" +
                                             std::to_string(cell.x) + "," +
                                             std::to_string(cell.y) + ")");
  }
  std::vector<Shape> shapes;
  shapes.reserve(world.shapes().size() - 1);
  for (const Shape &s : world.shapes()) {
    if (&s != top) shapes.push_back(s);
  }
  return WorldModel(world.board_size(), std::move(shapes), top->payload());
}

bool AdmitsPlacement(const WorldModel &world, Cell cell) {
  if (!world.InBounds(cell)) return false;
  const Shape *top = world.Top(cell);
  return top == nullptr || top->type == ShapeType::kCube;
}

WorldModel PlaceAt(const WorldModel &world, Cell cell) {
  if (!world.gripper()) {
    throw Error(ErrorCode::kGripperEmpty, "gripper is empty");
  }
  if (!world.InBounds(cell)) {
    throw Error(ErrorCode::kOffBoardCell, "cell is off the board");
  }
  if (!AdmitsPlacement(world, cell)) {
    throw Error(ErrorCode::kUnsupportedPlacement,
                "column top at (" + std::to_string(cell.x) + "," +
                    std::to_string(cell.y) + ") is a prism");
  }
  std::vector<Shape> shapes = world.shapes();
  shapes.push_back(Shape{world.gripper()->type, world.gripper()->color, cell.x,
                         cell.y, world.ColumnHeight(cell)});
  return WorldModel(world.board_size(), std::move(shapes), std::nullopt);
}

bool ScenesEqual(const WorldModel &a, const WorldModel &b) {
  return a.board_size() == b.board_size() && a.shapes() == b.shapes() &&
         a.gripper() == b.gripper();
}

nlohmann::json SceneToJson(const WorldModel &world) {
  nlohmann::json shapes = nlohmann::json::array();
  for (const Shape &s : world.shapes()) {
    shapes.push_back({{"type", ShapeTypeString(s.type)},
                      {"color", s.color},
                      {"x", s.x},
                      {"y", s.y},
                      {"z", s.z}});
  }
  nlohmann::json gripper = nullptr;
  if (world.gripper()) {
    gripper = {{"type", ShapeTypeString(world.gripper()->type)},
               {"color", world.gripper()->color}};
  }
  return {{"board_size", world.board_size()},
          {"shapes", std::move(shapes)},
          {"gripper", std::move(gripper)}};
}

WorldModel SceneFromJson(const nlohmann::json &json) {
  try {
    int board_size = json.value("board_size", WorldModel::kDefaultBoardSize);
    std::vector<Shape> shapes;
    for (const auto &item : json.at("shapes")) {
      ShapePayload p = PayloadFromJson(item);
      shapes.push_back(Shape{p.type, p.color, item.at("x").get<int>(),
                             item.at("y").get<int>(), item.at("z").get<int>()});
    }
    std::optional<ShapePayload> gripper;
    if (json.contains("gripper") && !json.at("gripper").is_null()) {
      gripper = PayloadFromJson(json.at("gripper"));
    }
    return WorldModel(board_size, std::move(shapes), std::move(gripper));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidWorld, std::string("bad scene: ") + e.what());
  }
}

WorldModel LoadScene(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open scene file " + path);
  nlohmann::json json;
  try {
    in >> json;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidWorld, path + ": " + e.what());
  }
  return SceneFromJson(json);
}

void SaveScene(const WorldModel &world, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write scene file " + path);
  out << SceneToJson(world).dump(2) << "\n";
}

}  // namespace rcparse
