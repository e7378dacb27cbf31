#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "subnav/grid.hpp"

namespace subnav {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();
inline constexpr double kSqrt2 = 1.41421356237309514547462185873883;

// Dijkstra cost-to-come field over an 8-connected grid (cardinal cost 1,
// diagonal cost sqrt(2), no corner cutting). Also stores parents for path
// extraction.
class DistanceField {
 public:
  DistanceField() = default;
  DistanceField(Pose source, int width, int height)
      : source_(source), width_(width), height_(height),
        dist_(static_cast<std::size_t>(width) * height, kUnreachable),
        parent_(static_cast<std::size_t>(width) * height, -1) {}

  Pose source() const { return source_; }
  int width() const { return width_; }
  int height() const { return height_; }

  double at(int x, int y) const { return dist_[static_cast<std::size_t>(y) * width_ + x]; }
  double at(Pose p) const { return at(p.x, p.y); }
  bool reachable(Pose p) const { return at(p) != kUnreachable; }

  double& mutable_at(int x, int y) { return dist_[static_cast<std::size_t>(y) * width_ + x]; }
  std::int32_t parent(int x, int y) const { return parent_[static_cast<std::size_t>(y) * width_ + x]; }
  std::int32_t& mutable_parent(int x, int y) { return parent_[static_cast<std::size_t>(y) * width_ + x]; }

 private:
  Pose source_;
  int width_ = 0;
  int height_ = 0;
  std::vector<double> dist_;
  std::vector<std::int32_t> parent_;  // flat cell index of predecessor, -1 at source/unreached
};

// Traversable = Free, plus Unknown when `optimistic` is set.
DistanceField distance_field(const SemanticGrid& map, Pose source, bool optimistic);

// Descends the parent chain from target back to the field's source.
// Returns the source-to-target pose list, or nullopt when unreachable.
std::optional<std::vector<Pose>> shortest_path(const DistanceField& field, Pose target);

// Accumulated 8-connected step cost of a pose sequence.
double path_cost(const std::vector<Pose>& path);

}  // namespace subnav
