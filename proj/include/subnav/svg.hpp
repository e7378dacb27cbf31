#pragma once

#include <string>
#include <vector>

#include "subnav/grid.hpp"

namespace subnav {

// Deterministic SVG rendering of a map, the unknown shading of a final
// belief, a trajectory polyline, and start/goal markers.
std::string render_trajectory_svg(const SemanticGrid& truth, const SemanticGrid& final_belief_map,
                                  const std::vector<Pose>& trajectory, Pose start, Pose goal);

}  // namespace subnav
