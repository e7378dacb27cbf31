#include "subnav/topograph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "subnav/distance.hpp"
#include "subnav/skeleton.hpp"

namespace subnav {

namespace {

constexpr int kDx8[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy8[8] = {0, 0, 1, -1, 1, -1, 1, -1};

// Crossing number of the 8-neighborhood: 1 for line ends, 2 for chain
// pixels, >=3 at junctions. Robust against corner artifacts where a raw
// neighbor count misclassifies.
int crossing_number(const BitGrid& s, int x, int y) {
  int p[8] = {s.get(x, y - 1),     s.get(x + 1, y - 1), s.get(x + 1, y), s.get(x + 1, y + 1),
              s.get(x, y + 1),     s.get(x - 1, y + 1), s.get(x - 1, y), s.get(x - 1, y - 1)};
  int a = 0;
  for (int i = 0; i < 8; ++i) a += (p[i] == 0 && p[(i + 1) % 8] == 1);
  return a;
}

double euclid(Pose a, Pose b) { return std::hypot(double(a.x - b.x), double(a.y - b.y)); }

// Lazily computed optimistic distance fields, one per source used.
class GeodesicCache {
 public:
  explicit GeodesicCache(const SemanticGrid& map) : map_(map) {}

  double between(Pose a, Pose b) {
    double d = field(a).at(b);
    if (d == kUnreachable) d = euclid(a, b);  // enclosed pocket, fall back
    return std::max(d, 1e-6);
  }

  const DistanceField& field(Pose src) {
    std::size_t key = map_.index(src.x, src.y);
    auto it = fields_.find(key);
    if (it == fields_.end()) it = fields_.emplace(key, distance_field(map_, src, true)).first;
    return it->second;
  }

 private:
  const SemanticGrid& map_;
  std::unordered_map<std::size_t, DistanceField> fields_;
};

struct Cluster {
  std::vector<Pose> pixels;
  Pose rep;
};

Pose centroid_pixel(const std::vector<Pose>& pixels) {
  double cx = 0, cy = 0;
  for (Pose p : pixels) {
    cx += p.x;
    cy += p.y;
  }
  cx /= pixels.size();
  cy /= pixels.size();
  Pose rep = pixels.front();
  double best = 1e300;
  for (Pose p : pixels) {
    double d = (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy);
    if (d < best - 1e-12) {
      best = d;
      rep = p;
    }
  }
  return rep;
}

}  // namespace

int TopoGraph::degree_excluding_goal(int node) const {
  if (node == goal_node) return static_cast<int>(nodes.size()) - 1;
  int d = 0;
  for (const TopoEdge& e : edges) {
    if (e.u == node && e.v != goal_node) ++d;
    if (e.v == node && e.u != goal_node) ++d;
  }
  return d;
}

TopoGraph build_graph(const Belief& belief, const std::vector<Frontier>& frontiers, Pose goal) {
  const SemanticGrid& m = belief.map;
  const int w = m.width(), h = m.height();
  auto flat = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };

  // (1) Unknown treated as free; frontier cells blocked except one point each.
  BitGrid mask(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) mask.set(x, y, m.at(x, y).state != CellState::Obstacle);
  for (const Frontier& f : frontiers) {
    for (Pose p : f.cells) mask.set(p.x, p.y, 0);
    mask.set(f.mask_point.x, f.mask_point.y, 1);
  }

  // (2)+(3) thin, then drop skeleton pixels outside known space.
  BitGrid skel = skeletonize(mask);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (skel.get(x, y) && m.is_unknown(x, y)) skel.set(x, y, 0);

  // (4) node pixels at junctions and line ends, merged into clusters.
  std::vector<char> is_node_pixel(flat(0, h), 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (skel.get(x, y)) {
        int cn = crossing_number(skel, x, y);
        if (cn != 2) is_node_pixel[flat(x, y)] = 1;
      }

  std::vector<Cluster> clusters;
  {
    std::vector<char> visited(is_node_pixel.size(), 0);
    for (int y0 = 0; y0 < h; ++y0)
      for (int x0 = 0; x0 < w; ++x0) {
        if (!is_node_pixel[flat(x0, y0)] || visited[flat(x0, y0)]) continue;
        Cluster c;
        std::vector<Pose> stack{Pose{x0, y0}};
        visited[flat(x0, y0)] = 1;
        while (!stack.empty()) {
          Pose p = stack.back();
          stack.pop_back();
          c.pixels.push_back(p);
          for (int k = 0; k < 8; ++k) {
            int nx = p.x + kDx8[k], ny = p.y + kDy8[k];
            if (!skel.in_bounds(nx, ny)) continue;
            if (is_node_pixel[flat(nx, ny)] && !visited[flat(nx, ny)]) {
              visited[flat(nx, ny)] = 1;
              stack.push_back(Pose{nx, ny});
            }
          }
        }
        std::sort(c.pixels.begin(), c.pixels.end(),
                  [](Pose a, Pose b) { return std::pair(a.y, a.x) < std::pair(b.y, b.x); });
        c.rep = centroid_pixel(c.pixels);
        clusters.push_back(std::move(c));
      }
  }

  // Pure cycles have neither line ends nor junctions; anchor one node per
  // such component at its (y,x)-smallest pixel.
  {
    std::vector<char> covered(is_node_pixel.size(), 0);
    auto flood = [&](Pose p0) {
      std::vector<Pose> stack{p0};
      covered[flat(p0.x, p0.y)] = 1;
      while (!stack.empty()) {
        Pose p = stack.back();
        stack.pop_back();
        for (int k = 0; k < 8; ++k) {
          int nx = p.x + kDx8[k], ny = p.y + kDy8[k];
          if (skel.in_bounds(nx, ny) && skel.get(nx, ny) && !covered[flat(nx, ny)]) {
            covered[flat(nx, ny)] = 1;
            stack.push_back(Pose{nx, ny});
          }
        }
      }
    };
    for (const Cluster& c : clusters) flood(c.pixels.front());
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        if (skel.get(x, y) && !covered[flat(x, y)]) {
          Cluster c{{Pose{x, y}}, Pose{x, y}};
          is_node_pixel[flat(x, y)] = 1;
          clusters.push_back(std::move(c));
          flood(Pose{x, y});
        }
  }

  std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
    return std::pair(a.rep.y, a.rep.x) < std::pair(b.rep.y, b.rep.x);
  });

  TopoGraph graph;
  std::vector<int> pixel_cluster(is_node_pixel.size(), -1);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (Pose p : clusters[i].pixels) pixel_cluster[flat(p.x, p.y)] = static_cast<int>(i);
    graph.nodes.push_back(TopoNode{clusters[i].rep, NodeKind::Structural, {}, 0.0});
  }

  std::set<std::pair<int, int>> edge_set;
  auto add_edge = [&](int u, int v) {
    if (u != v) edge_set.insert({std::min(u, v), std::max(u, v)});
  };

  // Edges: chain segments (skeleton minus node pixels) connect every pair
  // of clusters they touch; directly adjacent clusters connect too. A
  // diagonal step between chain pixels that squeezes past a node pixel is
  // not a chain connection, otherwise separate arcs meeting at a junction
  // would merge into one segment.
  {
    auto chain_adjacent = [&](Pose p, int k) {
      int nx = p.x + kDx8[k], ny = p.y + kDy8[k];
      if (k < 4) return true;
      bool bridge_a = skel.get(p.x, ny) && is_node_pixel[flat(p.x, ny)];
      bool bridge_b = skel.get(nx, p.y) && is_node_pixel[flat(nx, p.y)];
      return !bridge_a && !bridge_b;
    };
    std::vector<char> visited(is_node_pixel.size(), 0);
    for (int y0 = 0; y0 < h; ++y0)
      for (int x0 = 0; x0 < w; ++x0) {
        if (!skel.get(x0, y0) || is_node_pixel[flat(x0, y0)] || visited[flat(x0, y0)]) continue;
        std::vector<Pose> stack{Pose{x0, y0}};
        visited[flat(x0, y0)] = 1;
        std::set<int> touched;
        while (!stack.empty()) {
          Pose p = stack.back();
          stack.pop_back();
          for (int k = 0; k < 8; ++k) {
            int nx = p.x + kDx8[k], ny = p.y + kDy8[k];
            if (!skel.in_bounds(nx, ny) || !skel.get(nx, ny)) continue;
            int cl = pixel_cluster[flat(nx, ny)];
            if (cl >= 0) {
              touched.insert(cl);
            } else if (!visited[flat(nx, ny)] && chain_adjacent(p, k)) {
              visited[flat(nx, ny)] = 1;
              stack.push_back(Pose{nx, ny});
            }
          }
        }
        for (auto a = touched.begin(); a != touched.end(); ++a)
          for (auto b = std::next(a); b != touched.end(); ++b) add_edge(*a, *b);
      }
    for (const Cluster& c : clusters)
      for (Pose p : c.pixels)
        for (int k = 0; k < 8; ++k) {
          int nx = p.x + kDx8[k], ny = p.y + kDy8[k];
          if (!skel.in_bounds(nx, ny) || !skel.get(nx, ny)) continue;
          int cl = pixel_cluster[flat(nx, ny)];
          if (cl >= 0) add_edge(pixel_cluster[flat(p.x, p.y)], cl);
        }
  }

  // Fallback star when thinning produced nothing usable.
  if (graph.nodes.empty()) {
    graph.nodes.push_back(TopoNode{belief.pose, NodeKind::Structural, {}, 0.0});
  }

  // (5) one subgoal node per frontier, linked to its nearest structural node.
  const int n_structural = static_cast<int>(graph.nodes.size());
  for (const Frontier& f : frontiers) {
    int idx = static_cast<int>(graph.nodes.size());
    graph.nodes.push_back(TopoNode{f.mask_point, NodeKind::Subgoal, {}, 0.0});
    graph.subgoal_index[f.id] = idx;
    int nearest = 0;
    double best = 1e300;
    for (int i = 0; i < n_structural; ++i) {
      double d = euclid(f.mask_point, graph.nodes[i].pos);
      if (d < best - 1e-12) {
        best = d;
        nearest = i;
      }
    }
    add_edge(idx, nearest);
  }

  // (6) goal node connected to every other node.
  graph.goal_node = static_cast<int>(graph.nodes.size());
  graph.nodes.push_back(TopoNode{goal, NodeKind::Goal, {}, 0.0});
  for (int i = 0; i < graph.goal_node; ++i) add_edge(i, graph.goal_node);

  GeodesicCache cache(m);
  for (auto [u, v] : edge_set) {
    Pose a = graph.nodes[u].pos, b = graph.nodes[v].pos;
    // Source goal edges at the goal so a single field covers all of them.
    double len = (v == graph.goal_node) ? cache.between(b, a) : cache.between(a, b);
    graph.edges.push_back(TopoEdge{u, v, len});
  }
  return graph;
}

void node_features(TopoGraph& graph, const Belief& belief) {
  const int n = static_cast<int>(graph.nodes.size());
  std::vector<int> degree(n, 0);
  for (const TopoEdge& e : graph.edges) {
    if (e.u != graph.goal_node && e.v != graph.goal_node) {
      ++degree[e.u];
      ++degree[e.v];
    }
  }

  GeodesicCache cache(belief.map);
  const DistanceField* goal_field = nullptr;
  if (graph.goal_node >= 0) goal_field = &cache.field(graph.nodes[graph.goal_node].pos);

  for (int i = 0; i < n; ++i) {
    TopoNode& node = graph.nodes[i];
    node.feature.fill(0.0);
    const Cell& c = belief.map.at(node.pos);
    if (c.state != CellState::Unknown) node.feature[c.cls] = 1.0;
    node.feature[3] = (i == graph.goal_node) ? n - 1 : degree[i];
    node.feature[4] = node.kind == NodeKind::Subgoal ? 1.0 : 0.0;
    node.feature[5] = node.kind == NodeKind::Goal ? 1.0 : 0.0;
    if (goal_field) {
      double d = goal_field->at(node.pos);
      node.dist_goal = (d == kUnreachable) ? euclid(node.pos, graph.nodes[graph.goal_node].pos) : d;
    }
  }
}

}  // namespace subnav
