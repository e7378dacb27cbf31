#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace subnav {

// Semantic class slots. Procedural maps use 0=neutral, 1=red, 2=blue;
// floorplans use 1=hallway, 2=room.
inline constexpr int kNumClasses = 3;

enum class CellState : std::uint8_t { Unknown = 0, Free = 1, Obstacle = 2 };

struct Cell {
  CellState state = CellState::Unknown;
  std::uint8_t cls = 0;  // in [0, kNumClasses)

  bool operator==(const Cell&) const = default;
};

inline Cell free_cell(std::uint8_t cls = 0) { return {CellState::Free, cls}; }
inline Cell obstacle_cell(std::uint8_t cls = 0) { return {CellState::Obstacle, cls}; }

struct Pose {
  int x = 0;
  int y = 0;

  auto operator<=>(const Pose&) const = default;
};

// Row-major 2-D lattice of semantic occupancy cells.
class SemanticGrid {
 public:
  SemanticGrid() = default;
  SemanticGrid(int width, int height, Cell fill = {}, double resolution = 1.0)
      : width_(width), height_(height), resolution_(resolution),
        cells_(static_cast<std::size_t>(width) * height, fill) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("grid dimensions must be positive");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }

  bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }
  bool in_bounds(Pose p) const { return in_bounds(p.x, p.y); }

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  Cell& at(int x, int y) { return cells_[index(x, y)]; }
  const Cell& at(int x, int y) const { return cells_[index(x, y)]; }
  Cell& at(Pose p) { return at(p.x, p.y); }
  const Cell& at(Pose p) const { return at(p.x, p.y); }

  bool is_free(int x, int y) const { return at(x, y).state == CellState::Free; }
  bool is_obstacle(int x, int y) const { return at(x, y).state == CellState::Obstacle; }
  bool is_unknown(int x, int y) const { return at(x, y).state == CellState::Unknown; }
  bool is_free(Pose p) const { return is_free(p.x, p.y); }
  bool is_obstacle(Pose p) const { return is_obstacle(p.x, p.y); }
  bool is_unknown(Pose p) const { return is_unknown(p.x, p.y); }

  std::size_t count(CellState s) const {
    std::size_t n = 0;
    for (const Cell& c : cells_) n += (c.state == s);
    return n;
  }

  const std::vector<Cell>& cells() const { return cells_; }

  double diagonal() const;

  bool operator==(const SemanticGrid&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  std::vector<Cell> cells_;
};

// Partial map plus robot pose; the planner's entire state.
struct Belief {
  SemanticGrid map;
  Pose pose;

  // All-unknown map with the same dimensions as the ground truth.
  static Belief initial(const SemanticGrid& truth, Pose start) {
    return Belief{SemanticGrid(truth.width(), truth.height(), Cell{}, truth.resolution()), start};
  }
};

struct IntegrityError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace subnav
