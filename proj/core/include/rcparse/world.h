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

#ifndef RCPARSE_WORLD_H_
#define RCPARSE_WORLD_H_

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace rcparse {

// Coordinate frame: x grows rightward from the viewer, y grows away from the
// viewer (towards the back of the board), z grows upward. All indices are
// 0-based.

enum class ShapeType { kCube, kPrism };

const char *ShapeTypeString(ShapeType type);
std::optional<ShapeType> ParseShapeType(std::string_view text);

struct Cell {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Cell &, const Cell &) = default;
};

// Type and color of a shape, without a position (the gripper payload).
struct ShapePayload {
  ShapeType type = ShapeType::kCube;
  std::string color;

  friend bool operator==(const ShapePayload &, const ShapePayload &) = default;
};

struct Shape {
  ShapeType type = ShapeType::kCube;
  std::string color;
  int x = 0;
  int y = 0;
  int z = 0;

  Cell cell() const { return {x, y}; }
  ShapePayload payload() const { return {type, color}; }

  friend bool operator==(const Shape &, const Shape &) = default;
};

// Orders shapes by (x, y, z); the canonical storage order.
bool ShapeLess(const Shape &a, const Shape &b);

// Immutable scene: a square board of stacked shapes plus a one-shape
// gripper. Mutations return new worlds.
class WorldModel {
 public:
  static constexpr int kDefaultBoardSize = 8;

  explicit WorldModel(int board_size = kDefaultBoardSize);
  WorldModel(int board_size, std::vector<Shape> shapes,
             std::optional<ShapePayload> gripper = std::nullopt);

  int board_size() const { return board_size_; }
  // Sorted by (x, y, z).
  const std::vector<Shape> &shapes() const { return shapes_; }
  const std::optional<ShapePayload> &gripper() const { return gripper_; }

  bool InBounds(Cell cell) const;
  // Shapes at a cell, bottom to top.
  std::span<const Shape> Column(Cell cell) const;
  int ColumnHeight(Cell cell) const { return static_cast<int>(Column(cell).size()); }
  const Shape *Top(Cell cell) const;
  // Cells in row-major order (y outer, x inner).
  std::vector<Cell> Cells() const;
  // Cells holding at least one shape, sorted.
  std::vector<Cell> OccupiedCells() const;

 private:
  int board_size_;
  std::vector<Shape> shapes_;
  std::optional<ShapePayload> gripper_;
};

// Empty iff the occupancy, gravity, support and bounds rules all hold.
std::vector<std::string> Validate(const WorldModel &world);

// Removes the top shape of the column into the gripper. Throws
// Error(kGripperOccupied) or Error(kEmptyColumn).
WorldModel PickUp(const WorldModel &world, Cell cell);

// Places the held shape on top of the column. Throws Error(kGripperEmpty)
// or Error(kUnsupportedPlacement) when the column top is a prism.
WorldModel PlaceAt(const WorldModel &world, Cell cell);

// True when PlaceAt(world, cell) would succeed for a held shape.
bool AdmitsPlacement(const WorldModel &world, Cell cell);

bool ScenesEqual(const WorldModel &a, const WorldModel &b);

// Scene JSON: {"board_size", "shapes": [{"type","color","x","y","z"}],
// "gripper": null | {"type","color"}}.
nlohmann::json SceneToJson(const WorldModel &world);
WorldModel SceneFromJson(const nlohmann::json &json);
WorldModel LoadScene(const std::string &path);
void SaveScene(const WorldModel &world, const std::string &path);

}  // namespace rcparse

#endif  // RCPARSE_WORLD_H_
