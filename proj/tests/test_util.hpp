#pragma once

#include <random>
#include <string>
#include <vector>

#include "subnav/grid.hpp"

namespace subnav::test {

// ASCII fixture: '.'=free:0 'r'=free:1 'b'=free:2 '#'=obstacle:0
// 'R'=obstacle:1 'B'=obstacle:2 '?'=unknown
inline SemanticGrid grid_from_rows(const std::vector<std::string>& rows) {
  SemanticGrid g(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) {
      switch (rows[y][x]) {
        case '.': g.at(x, y) = free_cell(0); break;
        case 'r': g.at(x, y) = free_cell(1); break;
        case 'b': g.at(x, y) = free_cell(2); break;
        case '#': g.at(x, y) = obstacle_cell(0); break;
        case 'R': g.at(x, y) = obstacle_cell(1); break;
        case 'B': g.at(x, y) = obstacle_cell(2); break;
        case '?': g.at(x, y) = Cell{}; break;
        default: throw std::logic_error("bad fixture char");
      }
    }
  return g;
}

inline SemanticGrid random_obstacle_grid(std::mt19937_64& rng, int w, int h, double p_obstacle) {
  SemanticGrid g(w, h);
  std::uniform_real_distribution<double> u(0, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      g.at(x, y) = u(rng) < p_obstacle ? obstacle_cell(0) : free_cell(static_cast<std::uint8_t>(rng() % 3));
  return g;
}

}  // namespace subnav::test
