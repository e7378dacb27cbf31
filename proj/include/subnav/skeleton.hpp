#pragma once

#include <cstdint>
#include <vector>

#include "subnav/grid.hpp"

namespace subnav {

// Minimal binary raster used for thinning masks and skeletons.
struct BitGrid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BitGrid() = default;
  BitGrid(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  std::uint8_t get(int x, int y) const { return in_bounds(x, y) ? bits[static_cast<std::size_t>(y) * width + x] : 0; }
  void set(int x, int y, std::uint8_t v) { bits[static_cast<std::size_t>(y) * width + x] = v; }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : bits) n += b;
    return n;
  }
  bool operator==(const BitGrid&) const = default;
};

// Zhang-Suen thinning iterated to a fixpoint. Two safeguards keep the
// advertised invariants on arbitrary masks: a component is never erased
// entirely (one pixel is retained when a whole component is marked in a
// subiteration), and residual 2x2 blocks left by the classic rules are
// shaved afterwards with connectivity-preserving deletions.
BitGrid skeletonize(const BitGrid& mask);

int count_components_8(const BitGrid& g);

}  // namespace subnav
