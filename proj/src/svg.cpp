#include "subnav/svg.hpp"

#include <cstdio>
#include <sstream>

namespace subnav {

namespace {

const char* cell_color(const Cell& c) {
  if (c.state == CellState::Obstacle) {
    switch (c.cls) {
      case kNumClasses - 1: return "#5a7ea6";  // blue-tinted wall
      case 1: return "#a65a5a";                // red-tinted wall
      default: return "#3c3c3c";
    }
  }
  switch (c.cls) {
    case 1: return "#f2b8b8";
    case 2: return "#b8cdf2";
    default: return "#ffffff";
  }
}

}  // namespace

std::string render_trajectory_svg(const SemanticGrid& truth, const SemanticGrid& final_belief_map,
                                  const std::vector<Pose>& trajectory, Pose start, Pose goal) {
  const int w = truth.width(), h = truth.height();
  const int px = 8;  // pixels per cell
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * px << "\" height=\"" << h * px
     << "\" viewBox=\"0 0 " << w * px << ' ' << h * px << "\">\n";

  // Rows of same-colored cells merged into single rects.
  for (int y = 0; y < h; ++y) {
    int x = 0;
    while (x < w) {
      const char* color = cell_color(truth.at(x, y));
      int x1 = x + 1;
      while (x1 < w && cell_color(truth.at(x1, y)) == color) ++x1;
      os << "<rect x=\"" << x * px << "\" y=\"" << y * px << "\" width=\"" << (x1 - x) * px
         << "\" height=\"" << px << "\" fill=\"" << color << "\"/>\n";
      x = x1;
    }
  }

  // Unknown shading at the final step.
  for (int y = 0; y < h; ++y) {
    int x = 0;
    while (x < w) {
      if (!final_belief_map.is_unknown(x, y)) {
        ++x;
        continue;
      }
      int x1 = x + 1;
      while (x1 < w && final_belief_map.is_unknown(x1, y)) ++x1;
      os << "<rect x=\"" << x * px << "\" y=\"" << y * px << "\" width=\"" << (x1 - x) * px
         << "\" height=\"" << px << "\" fill=\"#000000\" fill-opacity=\"0.35\"/>\n";
      x = x1;
    }
  }

  if (!trajectory.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#1a9850\" stroke-width=\"3\" points=\"";
    char buf[48];
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%s%d,%d", i ? " " : "", trajectory[i].x * px + px / 2,
                    trajectory[i].y * px + px / 2);
      os << buf;
    }
    os << "\"/>\n";
  }

  os << "<circle cx=\"" << start.x * px + px / 2 << "\" cy=\"" << start.y * px + px / 2 << "\" r=\""
     << px << "\" fill=\"#ffd700\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  os << "<rect x=\"" << goal.x * px - px / 2 << "\" y=\"" << goal.y * px - px / 2 << "\" width=\""
     << 2 * px << "\" height=\"" << 2 * px
     << "\" fill=\"#d73027\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace subnav
