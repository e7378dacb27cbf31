#include "subnav/envgen.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "subnav/distance.hpp"
#include "subnav/grid_io.hpp"

namespace subnav {

namespace {

void carve(SemanticGrid& g, const Rect& r, std::uint8_t cls) {
  for (int y = r.y0; y <= r.y1; ++y)
    for (int x = r.x0; x <= r.x1; ++x) g.at(x, y) = free_cell(cls);
}

void fill(SemanticGrid& g, const Rect& r, std::uint8_t cls) {
  for (int y = r.y0; y <= r.y1; ++y)
    for (int x = r.x0; x <= r.x1; ++x) g.at(x, y) = obstacle_cell(cls);
}

void validate_scenario(const Scenario& s, const char* env) {
  if (s.start == s.goal) throw std::logic_error(std::string(env) + ": start equals goal");
  if (!s.truth.is_free(s.start) || !s.truth.is_free(s.goal))
    throw std::logic_error(std::string(env) + ": start/goal not on free cells");
  DistanceField f = distance_field(s.truth, s.start, false);
  if (!f.reachable(s.goal)) throw std::logic_error(std::string(env) + ": goal unreachable from start");
}

}  // namespace

void color_walls(SemanticGrid& grid) {
  SemanticGrid src = grid;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (!src.is_obstacle(x, y)) continue;
      int counts[kNumClasses] = {0, 0, 0};
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          int nx = x + dx, ny = y + dy;
          if (src.in_bounds(nx, ny) && src.is_free(nx, ny)) ++counts[src.at(nx, ny).cls];
        }
      std::uint8_t best = kClsNeutral;
      int best_n = 0;
      for (std::uint8_t c = 1; c < kNumClasses; ++c)
        if (counts[c] > best_n) {
          best_n = counts[c];
          best = c;
        }
      grid.at(x, y).cls = best;
    }
  }
}

Scenario gen_j_intersection(std::uint64_t seed, const JIntersectionParams& params) {
  JIntersectionInfo info;
  return gen_j_intersection(seed, params, info);
}

// Layout (61x61 defaults): a colored start room top-left, a neutral stem
// running right then down the map's vertical centerline to a T crossbar,
// one red and one blue arm, and a down-curling tail on each arm whose
// bottom corridors approach the goal at the exact bottom-center. Only the
// arm matching the room color connects to the goal, and the goal position
// is identical for both mirrorings so it reveals nothing about the branch.
Scenario gen_j_intersection(std::uint64_t seed, const JIntersectionParams& params, JIntersectionInfo& info) {
  const int W = params.width, H = params.height, cw = params.corridor;
  if (cw % 2 == 0 || cw < 3) throw std::invalid_argument("corridor width must be odd and >= 3");
  const int hw = cw / 2;
  const int cx = W / 2;

  std::mt19937_64 rng(seed);
  info.center_cls = (rng() & 1) ? kClsRed : kClsBlue;
  info.red_left = (rng() & 1) != 0;
  const std::uint8_t left_cls = info.red_left ? kClsRed : kClsBlue;
  const std::uint8_t right_cls = info.red_left ? kClsBlue : kClsRed;
  info.matching_left = (left_cls == info.center_cls);

  SemanticGrid g(W, H, obstacle_cell());

  const int margin = 6;
  const Rect room{margin, margin, margin + params.room - 1, margin + params.room - 1};
  const int leg_a_cy = room.y0 + params.room / 2;               // stem row through the room
  const Rect leg_a{room.x1 + 1, leg_a_cy - hw, cx + hw, leg_a_cy + hw};
  const int bar_y0 = H - 21, bar_y1 = bar_y0 + cw - 1;          // crossbar rows
  const Rect leg_b{cx - hw, leg_a.y1 + 1, cx + hw, bar_y0 - 1};
  const Rect bar{margin, bar_y0, W - 1 - margin, bar_y1};
  const Rect left_tail{margin, bar_y1 + 1, margin + cw - 1, H - 9};
  const Rect right_tail{W - 1 - margin - cw + 1, bar_y1 + 1, W - 1 - margin, H - 9};
  const int bot_y1 = left_tail.y1, bot_y0 = bot_y1 - cw + 1;    // bottom corridor rows

  carve(g, room, info.center_cls);
  carve(g, leg_a, kClsNeutral);
  carve(g, leg_b, kClsNeutral);
  carve(g, {bar.x0, bar.y0, cx - hw - 1, bar.y1}, left_cls);
  carve(g, {cx - hw, bar.y0, cx + hw, bar.y1}, kClsNeutral);
  carve(g, {cx + hw + 1, bar.y0, bar.x1, bar.y1}, right_cls);
  carve(g, left_tail, left_cls);
  carve(g, right_tail, right_cls);

  // Bottom corridors; the matching side reaches the center cell, the other
  // stops short of a 3-cell separator wall.
  if (info.matching_left) {
    carve(g, {left_tail.x0, bot_y0, cx, bot_y1}, left_cls);
    carve(g, {cx + 4, bot_y0, right_tail.x1, bot_y1}, right_cls);
  } else {
    carve(g, {left_tail.x0, bot_y0, cx - 4, bot_y1}, left_cls);
    carve(g, {cx, bot_y0, right_tail.x1, bot_y1}, right_cls);
  }

  color_walls(g);

  info.room = room;
  info.intersection = Pose{cx, (bar_y0 + bar_y1) / 2};
  info.left_branch = Rect{0, bar_y0, cx - hw - 1, H - 1};
  info.right_branch = Rect{cx + hw + 1, bar_y0, W - 1, H - 1};

  Scenario s;
  s.truth = std::move(g);
  s.start = Pose{room.x0 + params.room / 2, room.y0 + params.room / 2};
  s.goal = Pose{cx, bot_y0 + hw};
  s.seed = seed;
  validate_scenario(s, "j_intersection");
  return s;
}

Scenario gen_parallel_hallway(std::uint64_t seed, const ParallelHallwayParams& params) {
  ParallelHallwayInfo info;
  return gen_parallel_hallway(seed, params, info);
}

Scenario gen_parallel_hallway(std::uint64_t seed, const ParallelHallwayParams& params, ParallelHallwayInfo& info) {
  const int W = params.width, H = params.height, hw = params.hall_w;
  const int n_rooms = params.rooms_per_band;
  if (n_rooms < 2) throw std::invalid_argument("need at least 2 rooms per band");

  std::mt19937_64 rng(seed);
  info.dead_end_cls = (rng() & 1) ? kClsRed : kClsBlue;
  info.passage_cls = info.dead_end_cls == kClsRed ? kClsBlue : kClsRed;
  info.rooms.clear();
  info.hallways.clear();

  SemanticGrid g(W, H, obstacle_cell());

  const int hx0 = 4, hx1 = W - 5;
  const int band_h = (H - 8 - 3 * hw) / 2;
  const int top_y0 = 4;
  const Rect top_hall{hx0, top_y0, hx1, top_y0 + hw - 1};
  const Rect mid_hall{hx0, top_hall.y1 + band_h + 1, hx1, top_hall.y1 + band_h + hw};
  const Rect bot_hall{hx0, mid_hall.y1 + band_h + 1, hx1, mid_hall.y1 + band_h + hw};
  info.hallways = {top_hall, mid_hall, bot_hall};
  carve(g, top_hall, kClsNeutral);
  carve(g, mid_hall, kClsNeutral);
  carve(g, bot_hall, kClsNeutral);

  const int slot_w = (hx1 - hx0 + 1) / n_rooms;

  for (int band = 0; band < 2; ++band) {
    const Rect& above = info.hallways[band];
    const Rect& below = info.hallways[band + 1];
    int passage_slot = static_cast<int>(rng() % n_rooms);
    for (int slot = 0; slot < n_rooms; ++slot) {
      HallwayRoom room;
      room.band = band;
      room.passage = (slot == passage_slot);
      room.cls = room.passage ? info.passage_cls : info.dead_end_cls;
      const int sx0 = hx0 + slot * slot_w;
      room.interior = Rect{sx0 + 3, above.y1 + 3, sx0 + slot_w - 4, below.y0 - 3};
      carve(g, room.interior, room.cls);

      // Door columns; the far offset also exists for dead ends so the block
      // pattern is identical, only the far doorway is not carved.
      const int span = room.interior.width() - 3;
      int near_off = 1 + static_cast<int>(rng() % std::max(1, span - 1));
      int far_off = 1 + static_cast<int>(rng() % std::max(1, span - 1));
      if (std::abs(far_off - near_off) < 5) far_off = near_off >= span / 2 ? std::max(1, near_off - 5) : std::min(span - 1, near_off + 5);
      room.entry_side = static_cast<int>(rng() % 2);

      int top_door_x = room.interior.x0 + (room.entry_side == 0 ? near_off : far_off);
      int bot_door_x = room.interior.x0 + (room.entry_side == 0 ? far_off : near_off);
      auto carve_door = [&](int dx0, int wall_y0, int wall_y1) {
        for (int y = wall_y0; y <= wall_y1; ++y)
          for (int x = dx0; x < dx0 + 3; ++x) {
            g.at(x, y) = free_cell(room.cls);
            room.door_cells.push_back(Pose{x, y});
          }
      };
      if (room.passage || room.entry_side == 0) carve_door(top_door_x, above.y1 + 1, room.interior.y0 - 1);
      if (room.passage || room.entry_side == 1) carve_door(bot_door_x, room.interior.y1 + 1, below.y0 - 1);

      // Central obstruction spanning the door sight-line plus a margin, so
      // the far wall cannot be seen from the doorway.
      int mid_y = (room.interior.y0 + room.interior.y1) / 2;
      int bx0 = std::max(room.interior.x0 + 1, std::min(top_door_x, bot_door_x) - 1);
      int bx1 = std::min(room.interior.x1 - 1, std::max(top_door_x, bot_door_x) + 3);
      fill(g, {bx0, mid_y - 1, bx1, mid_y}, room.cls);

      int extra = static_cast<int>(rng() % (params.extra_block_max + 1));
      for (int b = 0; b < extra; ++b) {
        int bw = 2 + static_cast<int>(rng() % 3);
        int bh = 1 + static_cast<int>(rng() % 2);
        int ex = room.interior.x0 + 1 + static_cast<int>(rng() % std::max(1, room.interior.width() - bw - 2));
        int which = static_cast<int>(rng() % 2);
        int ey = which == 0 ? room.interior.y0 + 2 : room.interior.y1 - 1 - bh;
        Rect block{ex, ey, ex + bw - 1, ey + bh};
        // Keep doorway approach columns clear.
        bool clear = true;
        for (Pose d : room.door_cells)
          if (d.x >= block.x0 - 1 && d.x <= block.x1 + 1) clear = clear && (which == 0 ? d.y > mid_y : d.y < mid_y);
        if (clear) fill(g, block, room.cls);
      }
      info.rooms.push_back(std::move(room));
    }
  }

  color_walls(g);

  Scenario s;
  s.truth = std::move(g);
  int start_x = hx0 + 2 + static_cast<int>(rng() % (hx1 - hx0 - 3));
  int goal_x = hx0 + 2 + static_cast<int>(rng() % (hx1 - hx0 - 3));
  s.start = Pose{start_x, (top_hall.y0 + top_hall.y1) / 2};
  s.goal = Pose{goal_x, (bot_hall.y0 + bot_hall.y1) / 2};
  s.seed = seed;
  validate_scenario(s, "parallel_hallway");
  return s;
}

Scenario load_floorplan(const std::string& path) {
  MapDocument doc = load_map_text(read_text_file(path));
  if (!doc.start) throw ValidationError("floorplan missing start marker: " + path);
  if (!doc.goal) throw ValidationError("floorplan missing goal marker: " + path);
  if (doc.grid.count(CellState::Unknown) != 0)
    throw ValidationError("floorplan contains unknown cells: " + path);
  Scenario s{std::move(doc.grid), *doc.start, *doc.goal, 0};
  if (s.start == s.goal) throw ValidationError("start equals goal: " + path);
  DistanceField f = distance_field(s.truth, s.start, false);
  if (!f.reachable(s.goal)) throw ValidationError("goal not reachable from start: " + path);
  return s;
}

std::string save_scenario_text(const Scenario& s) {
  return save_map_text(MapDocument{s.truth, s.start, s.goal});
}

Scenario load_scenario_text(const std::string& text) {
  MapDocument doc = load_map_text(text);
  if (!doc.start || !doc.goal) throw ValidationError("scenario text missing start/goal markers");
  return Scenario{std::move(doc.grid), *doc.start, *doc.goal, 0};
}

}  // namespace subnav
