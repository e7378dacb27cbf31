#pragma once

#include <span>
#include <vector>

#include "subnav/grid.hpp"

namespace subnav {

struct ScanHit {
  Pose cell;
  Cell value;

  bool operator==(const ScanHit&) const = default;
};

// Simulates one planar scan: n_rays evenly spaced rays traced with integer
// DDA (Bresenham) from the pose, each clipped to Chebyshev radius `range`
// and stopped at the first obstacle cell (inclusive). Returns the revealed
// cells sorted by (y, x).
std::vector<ScanHit> raycast_scan(const SemanticGrid& truth, Pose pose, int range, int n_rays);

// Copies scan cells into the belief map. A scan cell that contradicts a
// previously revealed cell signals a simulator bug and throws IntegrityError.
void fuse(Belief& belief, std::span<const ScanHit> scan);

}  // namespace subnav
