#include "subnav/distance.hpp"

#include <algorithm>
#include <queue>

namespace subnav {

namespace {

struct QueueEntry {
  double dist;
  std::int32_t idx;
  bool operator>(const QueueEntry& o) const {
    return dist > o.dist || (dist == o.dist && idx > o.idx);
  }
};

constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

}  // namespace

DistanceField distance_field(const SemanticGrid& map, Pose source, bool optimistic) {
  if (!map.in_bounds(source)) throw std::invalid_argument("distance_field: source out of bounds");
  const int w = map.width(), h = map.height();
  DistanceField field(source, w, h);

  auto traversable = [&](int x, int y) {
    CellState s = map.at(x, y).state;
    return s == CellState::Free || (optimistic && s == CellState::Unknown);
  };
  if (!traversable(source.x, source.y)) return field;

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  field.mutable_at(source.x, source.y) = 0.0;
  open.push({0.0, static_cast<std::int32_t>(map.index(source.x, source.y))});

  while (!open.empty()) {
    auto [d, idx] = open.top();
    open.pop();
    int x = idx % w, y = idx / w;
    if (d > field.at(x, y)) continue;  // stale entry
    for (int k = 0; k < 8; ++k) {
      int nx = x + kDx[k], ny = y + kDy[k];
      if (!map.in_bounds(nx, ny) || !traversable(nx, ny)) continue;
      bool diagonal = k >= 4;
      if (diagonal && (!traversable(x, ny) || !traversable(nx, y))) continue;  // no corner cutting
      double nd = d + (diagonal ? kSqrt2 : 1.0);
      if (nd < field.at(nx, ny)) {
        field.mutable_at(nx, ny) = nd;
        field.mutable_parent(nx, ny) = idx;
        open.push({nd, static_cast<std::int32_t>(map.index(nx, ny))});
      }
    }
  }
  return field;
}

std::optional<std::vector<Pose>> shortest_path(const DistanceField& field, Pose target) {
  if (!field.reachable(target)) return std::nullopt;
  std::vector<Pose> rev;
  Pose p = target;
  while (true) {
    rev.push_back(p);
    if (p == field.source()) break;
    std::int32_t pi = field.parent(p.x, p.y);
    p = Pose{pi % field.width(), pi / field.width()};
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

double path_cost(const std::vector<Pose>& path) {
  double cost = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    int dx = std::abs(path[i].x - path[i - 1].x);
    int dy = std::abs(path[i].y - path[i - 1].y);
    cost += (dx + dy == 2) ? kSqrt2 : 1.0;
  }
  return cost;
}

}  // namespace subnav
