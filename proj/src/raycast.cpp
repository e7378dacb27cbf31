#include "subnav/raycast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace subnav {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// Bresenham trace from (x0,y0) to (x1,y1); stops early per visit().
template <typename Visit>
void trace_line(int x0, int y0, int x1, int y1, Visit&& visit) {
  int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  int x = x0, y = y0;
  while (true) {
    if (!visit(x, y)) return;
    if (x == x1 && y == y1) return;
    int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
}

}  // namespace

std::vector<ScanHit> raycast_scan(const SemanticGrid& truth, Pose pose, int range, int n_rays) {
  if (!truth.in_bounds(pose)) throw std::invalid_argument("raycast_scan: pose out of bounds");
  std::vector<char> seen(static_cast<std::size_t>(truth.width()) * truth.height(), 0);
  std::vector<ScanHit> out;

  auto reveal = [&](int x, int y) {
    std::size_t idx = truth.index(x, y);
    if (!seen[idx]) {
      seen[idx] = 1;
      out.push_back({Pose{x, y}, truth.at(x, y)});
    }
  };

  reveal(pose.x, pose.y);
  if (range > 0 && !truth.is_obstacle(pose)) {
    for (int k = 0; k < n_rays; ++k) {
      double theta = kTwoPi * k / n_rays;
      double ux = std::cos(theta), uy = std::sin(theta);
      // Scale the unit direction so the endpoint lies on the Chebyshev ring
      // at radius `range`.
      double s = range / std::max(std::abs(ux), std::abs(uy));
      int ex = pose.x + static_cast<int>(std::llround(ux * s));
      int ey = pose.y + static_cast<int>(std::llround(uy * s));
      trace_line(pose.x, pose.y, ex, ey, [&](int x, int y) {
        if (!truth.in_bounds(x, y)) return false;
        if (std::max(std::abs(x - pose.x), std::abs(y - pose.y)) > range) return false;
        reveal(x, y);
        return !truth.is_obstacle(x, y);  // obstacle revealed, ray stops
      });
    }
  }

  std::sort(out.begin(), out.end(), [](const ScanHit& a, const ScanHit& b) {
    return std::pair(a.cell.y, a.cell.x) < std::pair(b.cell.y, b.cell.x);
  });
  return out;
}

void fuse(Belief& belief, std::span<const ScanHit> scan) {
  for (const ScanHit& hit : scan) {
    if (!belief.map.in_bounds(hit.cell)) throw IntegrityError("fuse: scan cell out of bounds");
    Cell& dst = belief.map.at(hit.cell);
    if (dst.state != CellState::Unknown && dst != hit.value) {
      throw IntegrityError("fuse: scan contradicts previously revealed cell");
    }
    dst = hit.value;
  }
}

}  // namespace subnav
