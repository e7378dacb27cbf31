#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "subnav/raycast.hpp"
#include "subnav/skeleton.hpp"
#include "subnav/topograph.hpp"
#include "test_util.hpp"

using namespace subnav;
using test::grid_from_rows;

namespace {

Belief belief_from_rows(const std::vector<std::string>& rows, Pose pose) {
  return Belief{grid_from_rows(rows), pose};
}

// Classic two-subiteration thinning with simultaneous deletion; reference
// implementation kept independent of the production code path.
BitGrid reference_thinning(BitGrid img) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int sub = 0; sub < 2; ++sub) {
      std::vector<std::pair<int, int>> marks;
      for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
          if (!img.get(x, y)) continue;
          int p[8] = {img.get(x, y - 1), img.get(x + 1, y - 1), img.get(x + 1, y),
                      img.get(x + 1, y + 1), img.get(x, y + 1), img.get(x - 1, y + 1),
                      img.get(x - 1, y), img.get(x - 1, y - 1)};
          int b = 0;
          for (int v : p) b += v;
          if (b < 2 || b > 6) continue;
          int a = 0;
          for (int i = 0; i < 8; ++i) a += (p[i] == 0 && p[(i + 1) % 8] == 1);
          if (a != 1) continue;
          int m1 = sub == 0 ? p[0] * p[2] * p[4] : p[0] * p[2] * p[6];
          int m2 = sub == 0 ? p[2] * p[4] * p[6] : p[0] * p[4] * p[6];
          if (m1 == 0 && m2 == 0) marks.push_back({x, y});
        }
      for (auto [x, y] : marks) img.set(x, y, 0);
      changed = changed || !marks.empty();
    }
  }
  return img;
}

int count_nodes(const TopoGraph& g, NodeKind kind) {
  int n = 0;
  for (const TopoNode& node : g.nodes) n += node.kind == kind;
  return n;
}

}  // namespace

TEST_SUITE_BEGIN("topo");

TEST_CASE("frontiers: fully revealed map has none") {
  Belief b = belief_from_rows({"....", "....", "...."}, Pose{0, 0});
  CHECK(extract_frontiers(b).empty());
}

TEST_CASE("frontiers: half-revealed strip yields one frontier at the boundary column") {
  Belief b = belief_from_rows({
      "...???",
      "...???",
      "...???",
      "...???",
      "...???",
      "...???",
  }, Pose{0, 0});
  auto frontiers = extract_frontiers(b);
  REQUIRE(frontiers.size() == 1);
  CHECK(frontiers[0].cells.size() == 6);
  for (Pose p : frontiers[0].cells) CHECK(p.x == 3);
  CHECK(frontiers[0].mask_point.x == 3);
}

TEST_CASE("frontiers: forked corridor yields two frontiers") {
  Belief b = belief_from_rows({
      "#########",
      "#.......#",
      "##.###.##",
      "##?###?##",
      "#########",
  }, Pose{1, 1});
  auto frontiers = extract_frontiers(b);
  CHECK(frontiers.size() == 2);
}

TEST_CASE("frontier partition: every unknown cell adjacent to free space is in exactly one frontier") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 25; ++trial) {
    SemanticGrid truth = test::random_obstacle_grid(rng, 20, 16, 0.25);
    Pose pose{static_cast<int>(rng() % 20), static_cast<int>(rng() % 16)};
    truth.at(pose) = free_cell();
    Belief b = Belief::initial(truth, pose);
    fuse(b, raycast_scan(truth, pose, 4 + static_cast<int>(rng() % 5), 180));

    auto frontiers = extract_frontiers(b);
    std::map<std::pair<int, int>, int> membership;
    for (const Frontier& f : frontiers) {
      CHECK(!f.cells.empty());
      for (Pose p : f.cells) membership[{p.x, p.y}] += 1;
    }
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 20; ++x) {
        bool is_frontier = b.map.is_unknown(x, y) &&
                           ((x > 0 && b.map.is_free(x - 1, y)) || (x + 1 < 20 && b.map.is_free(x + 1, y)) ||
                            (y > 0 && b.map.is_free(x, y - 1)) || (y + 1 < 16 && b.map.is_free(x, y + 1)));
        CHECK(membership[{x, y}] == (is_frontier ? 1 : 0));
      }
  }
}

TEST_CASE("skeleton: one-pixel line is unchanged") {
  BitGrid line(9, 5);
  for (int x = 1; x <= 7; ++x) line.set(x, 2, 1);
  CHECK(skeletonize(line) == line);
}

TEST_CASE("skeleton: solid 7x7 square thins to the center pixel") {
  BitGrid sq(7, 7);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 7; ++x) sq.set(x, y, 1);
  BitGrid skel = skeletonize(sq);
  BitGrid ref = reference_thinning(sq);
  CHECK(skel == ref);
  CHECK(skel.count() <= 7);
  CHECK(skel.get(3, 3) == 1);
}

TEST_CASE("skeleton: two disjoint blobs stay two components") {
  BitGrid g(20, 9);
  for (int y = 1; y <= 5; ++y)
    for (int x = 1; x <= 5; ++x) g.set(x, y, 1);
  for (int y = 2; y <= 7; ++y)
    for (int x = 12; x <= 18; ++x) g.set(x, y, 1);
  BitGrid skel = skeletonize(g);
  CHECK(count_components_8(skel) == 2);
}

TEST_CASE("skeleton: thinness and connectivity preservation on random masks") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    BitGrid mask(24, 18);
    std::uniform_real_distribution<double> u(0, 1);
    double density = 0.2 + 0.6 * u(rng);
    for (auto& bit : mask.bits) bit = u(rng) < density;
    BitGrid skel = skeletonize(mask);
    for (int y = 0; y + 1 < skel.height; ++y)
      for (int x = 0; x + 1 < skel.width; ++x) {
        bool block = skel.get(x, y) && skel.get(x + 1, y) && skel.get(x, y + 1) && skel.get(x + 1, y + 1);
        CAPTURE(trial);
        CAPTURE(x);
        CAPTURE(y);
        CHECK(!block);
      }
    CHECK(count_components_8(skel) == count_components_8(mask));
  }
}

TEST_CASE("build_graph: straight corridor with one frontier at the end") {
  Belief b = belief_from_rows({
      "????????????",
      "############",
      "#.........??",
      "############",
      "????????????",
  }, Pose{1, 2});
  auto frontiers = extract_frontiers(b);
  REQUIRE(frontiers.size() == 1);
  TopoGraph g = build_graph(b, frontiers, Pose{11, 2});
  CHECK(count_nodes(g, NodeKind::Structural) == 2);
  CHECK(count_nodes(g, NodeKind::Subgoal) == 1);
  CHECK(count_nodes(g, NodeKind::Goal) == 1);
  CHECK(g.degree_excluding_goal(g.goal_node) == static_cast<int>(g.nodes.size()) - 1);
  int goal_edges = 0;
  for (const TopoEdge& e : g.edges) goal_edges += (e.u == g.goal_node || e.v == g.goal_node);
  CHECK(goal_edges == 3);
  for (const TopoEdge& e : g.edges) {
    CHECK(e.length > 0.0);
    CHECK(std::isfinite(e.length));
  }
}

TEST_CASE("build_graph: T junction yields exactly one degree-3 structural node") {
  Belief b = belief_from_rows({
      "#########",
      "#.......#",
      "####.####",
      "####.####",
      "#########",
  }, Pose{1, 1});
  auto frontiers = extract_frontiers(b);
  REQUIRE(frontiers.empty());
  TopoGraph g = build_graph(b, frontiers, Pose{3, 1});
  int junctions = 0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (g.nodes[i].kind != NodeKind::Structural) continue;
    int deg = g.degree_excluding_goal(static_cast<int>(i));
    if (deg >= 3) {
      ++junctions;
      CHECK(deg == 3);
    }
  }
  CHECK(junctions == 1);
}

TEST_CASE("build_graph: goal node always connects to every other node") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    SemanticGrid truth = test::random_obstacle_grid(rng, 22, 18, 0.2);
    Pose pose{static_cast<int>(1 + rng() % 20), static_cast<int>(1 + rng() % 16)};
    truth.at(pose) = free_cell();
    Belief b = Belief::initial(truth, pose);
    fuse(b, raycast_scan(truth, pose, 6, 360));
    auto frontiers = extract_frontiers(b);
    TopoGraph g = build_graph(b, frontiers, Pose{21, 17});
    CHECK(g.degree_excluding_goal(g.goal_node) == static_cast<int>(g.nodes.size()) - 1);
    CHECK(g.subgoal_index.size() == frontiers.size());
    for (const auto& [id, idx] : g.subgoal_index) {
      bool linked = false;
      for (const TopoEdge& e : g.edges) {
        int other = e.u == idx ? e.v : (e.v == idx ? e.u : -1);
        if (other >= 0 && g.nodes[other].kind == NodeKind::Structural) linked = true;
      }
      CHECK(linked);
    }
  }
}

TEST_CASE("build_graph: deterministic for a fixed belief") {
  std::mt19937_64 rng(5);
  SemanticGrid truth = test::random_obstacle_grid(rng, 25, 20, 0.22);
  Pose pose{12, 10};
  truth.at(pose) = free_cell();
  Belief b = Belief::initial(truth, pose);
  fuse(b, raycast_scan(truth, pose, 7, 360));
  auto f1 = extract_frontiers(b);
  auto f2 = extract_frontiers(b);
  TopoGraph g1 = build_graph(b, f1, Pose{24, 19});
  TopoGraph g2 = build_graph(b, f2, Pose{24, 19});
  node_features(g1, b);
  node_features(g2, b);
  REQUIRE(g1.nodes.size() == g2.nodes.size());
  for (std::size_t i = 0; i < g1.nodes.size(); ++i) {
    CHECK(g1.nodes[i].pos == g2.nodes[i].pos);
    CHECK(g1.nodes[i].kind == g2.nodes[i].kind);
    CHECK(g1.nodes[i].feature == g2.nodes[i].feature);
    CHECK(g1.nodes[i].dist_goal == g2.nodes[i].dist_goal);
  }
  REQUIRE(g1.edges.size() == g2.edges.size());
  for (std::size_t i = 0; i < g1.edges.size(); ++i) {
    CHECK(g1.edges[i].u == g2.edges[i].u);
    CHECK(g1.edges[i].v == g2.edges[i].v);
    CHECK(g1.edges[i].length == g2.edges[i].length);
  }
}

TEST_CASE("build_graph: degenerate tiny belief falls back to a star graph") {
  Belief b = belief_from_rows({
      "???",
      "?.?",
      "???",
  }, Pose{1, 1});
  auto frontiers = extract_frontiers(b);
  REQUIRE(!frontiers.empty());
  TopoGraph g = build_graph(b, frontiers, Pose{2, 2});
  CHECK(count_nodes(g, NodeKind::Structural) >= 1);
  CHECK(g.degree_excluding_goal(g.goal_node) == static_cast<int>(g.nodes.size()) - 1);
}

TEST_CASE("node_features: layout matches the documented 6-float scheme") {
  Belief b = belief_from_rows({
      "#######",
      "#..rr.#",
      "#..rr?#",
      "#######",
  }, Pose{1, 1});

  TopoGraph g;
  g.nodes.push_back(TopoNode{Pose{1, 1}, NodeKind::Structural, {}, 0});  // A neutral
  g.nodes.push_back(TopoNode{Pose{2, 1}, NodeKind::Structural, {}, 0});  // B neutral
  g.nodes.push_back(TopoNode{Pose{1, 2}, NodeKind::Structural, {}, 0});  // C neutral
  g.nodes.push_back(TopoNode{Pose{3, 2}, NodeKind::Subgoal, {}, 0});     // S on a red cell
  g.nodes.push_back(TopoNode{Pose{5, 2}, NodeKind::Goal, {}, 0});        // G on an unknown cell
  g.goal_node = 4;
  g.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 2.0}, {3, 1, 1.5},
             {4, 0, 1.0}, {4, 1, 1.0}, {4, 2, 1.0}, {4, 3, 1.0}};
  node_features(g, b);

  CHECK(g.nodes[0].feature == std::array<double, 6>{1, 0, 0, 3, 0, 0});  // neutral junction, degree 3
  CHECK(g.nodes[3].feature == std::array<double, 6>{0, 1, 0, 2, 1, 0});  // red subgoal, 2 structural nbrs
  CHECK(g.nodes[4].feature == std::array<double, 6>{0, 0, 0, 4, 0, 1});  // goal: zeros when unrevealed, n-1
  for (const TopoNode& n : g.nodes) CHECK(n.dist_goal >= 0.0);
}

TEST_SUITE_END();
