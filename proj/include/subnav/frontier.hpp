#pragma once

#include <cstdint>
#include <vector>

#include "subnav/grid.hpp"

namespace subnav {

// A maximal 8-connected component of Unknown cells that are 4-adjacent to
// revealed Free space.
struct Frontier {
  std::vector<Pose> cells;  // sorted by (y, x)
  Pose mask_point;          // cell nearest the centroid, ties by (y, x)
  std::uint64_t id = 0;     // stable hash of the sorted cells
};

std::vector<Frontier> extract_frontiers(const Belief& belief);

// FNV-1a over a byte stream; used for frontier ids and config hashes.
std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 14695981039346656037ull);

}  // namespace subnav
