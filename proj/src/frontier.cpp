#include "subnav/frontier.hpp"

#include <algorithm>
#include <cmath>

namespace subnav {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<Frontier> extract_frontiers(const Belief& belief) {
  const SemanticGrid& m = belief.map;
  const int w = m.width(), h = m.height();

  auto is_frontier_cell = [&](int x, int y) {
    if (!m.is_unknown(x, y)) return false;
    return (x > 0 && m.is_free(x - 1, y)) || (x + 1 < w && m.is_free(x + 1, y)) ||
           (y > 0 && m.is_free(x, y - 1)) || (y + 1 < h && m.is_free(x, y + 1));
  };

  std::vector<char> mark(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) mark[m.index(x, y)] = is_frontier_cell(x, y);

  std::vector<Frontier> out;
  std::vector<char> visited(mark.size(), 0);
  std::vector<Pose> stack;
  for (int y0 = 0; y0 < h; ++y0) {
    for (int x0 = 0; x0 < w; ++x0) {
      std::size_t i0 = m.index(x0, y0);
      if (!mark[i0] || visited[i0]) continue;
      Frontier f;
      stack.assign(1, Pose{x0, y0});
      visited[i0] = 1;
      while (!stack.empty()) {
        Pose p = stack.back();
        stack.pop_back();
        f.cells.push_back(p);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            int nx = p.x + dx, ny = p.y + dy;
            if ((dx | dy) == 0 || !m.in_bounds(nx, ny)) continue;
            std::size_t ni = m.index(nx, ny);
            if (mark[ni] && !visited[ni]) {
              visited[ni] = 1;
              stack.push_back(Pose{nx, ny});
            }
          }
      }
      std::sort(f.cells.begin(), f.cells.end(),
                [](Pose a, Pose b) { return std::pair(a.y, a.x) < std::pair(b.y, b.x); });

      double cx = 0, cy = 0;
      for (Pose p : f.cells) {
        cx += p.x;
        cy += p.y;
      }
      cx /= f.cells.size();
      cy /= f.cells.size();
      double best = 1e300;
      for (Pose p : f.cells) {
        double d = (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy);
        if (d < best - 1e-12) {
          best = d;
          f.mask_point = p;
        }
      }

      std::uint64_t id = 14695981039346656037ull;
      for (Pose p : f.cells) {
        std::int32_t xy[2] = {p.x, p.y};
        id = fnv1a(xy, sizeof(xy), id);
      }
      f.id = id;
      out.push_back(std::move(f));
    }
  }

  std::sort(out.begin(), out.end(), [](const Frontier& a, const Frontier& b) {
    if (a.id != b.id) return a.id < b.id;
    return std::pair(a.cells[0].y, a.cells[0].x) < std::pair(b.cells[0].y, b.cells[0].x);
  });
  return out;
}

}  // namespace subnav
