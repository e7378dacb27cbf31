#include "subnav/skeleton.hpp"

#include <array>

namespace subnav {

namespace {

// Neighborhood p2..p9 clockwise from north, as in the classic formulation.
std::array<int, 8> neighborhood(const BitGrid& g, int x, int y) {
  return {g.get(x, y - 1), g.get(x + 1, y - 1), g.get(x + 1, y), g.get(x + 1, y + 1),
          g.get(x, y + 1), g.get(x - 1, y + 1), g.get(x - 1, y), g.get(x - 1, y - 1)};
}

int transitions(const std::array<int, 8>& p) {
  int a = 0;
  for (int i = 0; i < 8; ++i) a += (p[i] == 0 && p[(i + 1) % 8] == 1);
  return a;
}

bool zs_deletable(const BitGrid& g, int x, int y, int subiter) {
  auto p = neighborhood(g, x, y);
  int b = 0;
  for (int v : p) b += v;
  if (b < 2 || b > 6) return false;
  if (transitions(p) != 1) return false;
  // p[0]=N, p[2]=E, p[4]=S, p[6]=W
  int m1 = subiter == 0 ? p[0] * p[2] * p[4] : p[0] * p[2] * p[6];
  int m2 = subiter == 0 ? p[2] * p[4] * p[6] : p[0] * p[4] * p[6];
  return m1 == 0 && m2 == 0;
}

void label_components(const BitGrid& g, std::vector<int>& label, int& n_labels) {
  label.assign(g.bits.size(), -1);
  n_labels = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y0 = 0; y0 < g.height; ++y0)
    for (int x0 = 0; x0 < g.width; ++x0) {
      std::size_t i0 = static_cast<std::size_t>(y0) * g.width + x0;
      if (!g.bits[i0] || label[i0] >= 0) continue;
      int id = n_labels++;
      stack.assign(1, {x0, y0});
      label[i0] = id;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            int nx = x + dx, ny = y + dy;
            if ((dx | dy) == 0 || !g.in_bounds(nx, ny)) continue;
            std::size_t ni = static_cast<std::size_t>(ny) * g.width + nx;
            if (g.bits[ni] && label[ni] < 0) {
              label[ni] = id;
              stack.push_back({nx, ny});
            }
          }
      }
    }
}

// Crossing number: deleting the pixel keeps its punctured neighborhood
// 8-connected iff exactly one run of set neighbors.
bool removal_preserves_connectivity(const BitGrid& g, int x, int y) {
  auto p = neighborhood(g, x, y);
  return transitions(p) == 1;
}

}  // namespace

int count_components_8(const BitGrid& g) {
  std::vector<int> label;
  int n = 0;
  label_components(g, label, n);
  return n;
}

BitGrid skeletonize(const BitGrid& mask) {
  BitGrid img = mask;
  std::vector<std::size_t> marked;
  std::vector<int> label;
  int n_labels = 0;

  bool changed = true;
  while (changed) {
    changed = false;
    for (int subiter = 0; subiter < 2; ++subiter) {
      marked.clear();
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
          if (img.get(x, y) && zs_deletable(img, x, y, subiter))
            marked.push_back(static_cast<std::size_t>(y) * img.width + x);
      if (marked.empty()) continue;

      // Keep the first marked pixel of any component that would vanish.
      label_components(img, label, n_labels);
      std::vector<std::size_t> remaining(n_labels, 0);
      for (std::size_t i = 0; i < img.bits.size(); ++i)
        if (img.bits[i]) ++remaining[label[i]];
      for (std::size_t i : marked) --remaining[label[i]];
      std::vector<char> kept(n_labels, 0);
      for (std::size_t i : marked) {
        int c = label[i];
        if (remaining[c] == 0 && !kept[c]) {
          kept[c] = 1;
          continue;
        }
        img.bits[i] = 0;
        changed = true;
      }
    }
  }

  // Shave residual 2x2 blocks (staircase artifacts of the classic rules).
  // A removal is accepted when the global component count is unchanged;
  // when every corner of a block is load-bearing, leaf pixels hanging off
  // the block are nibbled first, which is always safe and frees a corner.
  int components = count_components_8(img);
  auto safe_remove = [&](int x, int y) {
    img.set(x, y, 0);
    if (count_components_8(img) == components) return true;
    img.set(x, y, 1);
    return false;
  };
  static constexpr int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  bool progress = true;
  while (progress) {
    progress = false;
    for (int y = 0; y + 1 < img.height; ++y)
      for (int x = 0; x + 1 < img.width; ++x) {
        if (!(img.get(x, y) && img.get(x + 1, y) && img.get(x, y + 1) && img.get(x + 1, y + 1))) continue;
        const Pose corners[4] = {{x, y}, {x + 1, y}, {x, y + 1}, {x + 1, y + 1}};
        bool shaved = false;
        for (Pose c : corners) {
          if (removal_preserves_connectivity(img, c.x, c.y) || safe_remove(c.x, c.y)) {
            img.set(c.x, c.y, 0);
            shaved = true;
            break;
          }
        }
        if (!shaved) {
          for (Pose c : corners) {
            for (int k = 0; k < 8 && !shaved; ++k) {
              int lx = c.x + dxs[k], ly = c.y + dys[k];
              bool in_block = lx >= x && lx <= x + 1 && ly >= y && ly <= y + 1;
              if (in_block || !img.get(lx, ly)) continue;
              int deg = 0;
              for (int j = 0; j < 8; ++j) deg += img.get(lx + dxs[j], ly + dys[j]);
              if (deg == 1) {
                img.set(lx, ly, 0);  // leaf, cannot split anything
                shaved = true;
              }
            }
            if (shaved) break;
          }
        }
        if (!shaved) {
          // every corner is an articulation point: delete the smallest
          // pendant arm hanging off the first corner, which frees it
          Pose c = corners[0];
          img.set(c.x, c.y, 0);
          std::vector<int> label;
          int n_labels = 0;
          label_components(img, label, n_labels);
          std::vector<int> size(n_labels, 0);
          for (std::size_t i = 0; i < img.bits.size(); ++i)
            if (img.bits[i]) ++size[label[i]];
          int keep = label[static_cast<std::size_t>(y + 1) * img.width + (x + 1)];
          int arm = -1;
          for (int k = 0; k < 8; ++k) {
            int lx = c.x + dxs[k], ly = c.y + dys[k];
            if (!img.get(lx, ly)) continue;
            int l = label[static_cast<std::size_t>(ly) * img.width + lx];
            if (l != keep && (arm < 0 || size[l] < size[arm])) arm = l;
          }
          img.set(c.x, c.y, 1);
          if (arm >= 0) {
            for (std::size_t i = 0; i < img.bits.size(); ++i)
              if (img.bits[i] && label[i] == arm) img.bits[i] = 0;
            shaved = true;
          }
        }
        progress = progress || shaved;
      }
  }
  return img;
}

}  // namespace subnav
