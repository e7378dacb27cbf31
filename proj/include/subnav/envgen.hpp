#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subnav/grid.hpp"

namespace subnav {

inline constexpr std::uint8_t kClsNeutral = 0;
inline constexpr std::uint8_t kClsRed = 1;
inline constexpr std::uint8_t kClsBlue = 2;

struct Scenario {
  SemanticGrid truth;
  Pose start;
  Pose goal;
  std::uint64_t seed = 0;
};

struct Rect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive

  bool contains(Pose p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
};

struct JIntersectionParams {
  int width = 61;
  int height = 61;
  int corridor = 5;   // corridor width, odd
  int room = 13;      // colored start room side length
};

struct JIntersectionInfo {
  std::uint8_t center_cls = kClsRed;  // color of the start room
  bool red_left = true;               // which branch is red
  bool matching_left = true;          // branch containing the goal
  Rect room;                          // colored start room interior
  Pose intersection;                  // center of the T
  Rect left_branch;                   // everything left of the stem at/below the crossbar
  Rect right_branch;
};

struct ParallelHallwayParams {
  int width = 96;
  int height = 60;
  int hall_w = 5;
  int rooms_per_band = 4;
  int extra_block_max = 2;
};

struct HallwayRoom {
  Rect interior;
  int band = 0;         // 0 = between top and middle hallway, 1 = between middle and bottom
  bool passage = false;
  std::uint8_t cls = kClsRed;
  std::vector<Pose> door_cells;  // carved doorway cells
  int entry_side = 0;            // dead ends only: 0 = door to the hallway above, 1 = below
};

struct ParallelHallwayInfo {
  std::uint8_t dead_end_cls = kClsRed;
  std::uint8_t passage_cls = kClsBlue;
  std::vector<HallwayRoom> rooms;
  std::vector<Rect> hallways;  // top, middle, bottom
};

Scenario gen_j_intersection(std::uint64_t seed, const JIntersectionParams& params = {});
Scenario gen_j_intersection(std::uint64_t seed, const JIntersectionParams& params, JIntersectionInfo& info);

Scenario gen_parallel_hallway(std::uint64_t seed, const ParallelHallwayParams& params = {});
Scenario gen_parallel_hallway(std::uint64_t seed, const ParallelHallwayParams& params, ParallelHallwayInfo& info);

// Loads a user-supplied grid in the map text format with S/G markers and
// validates start-to-goal reachability.
Scenario load_floorplan(const std::string& path);

std::string save_scenario_text(const Scenario& s);
Scenario load_scenario_text(const std::string& text);

// Obstacle cells take the majority non-neutral class of their 8-adjacent
// free cells (ties to the lower class index).
void color_walls(SemanticGrid& grid);

}  // namespace subnav
