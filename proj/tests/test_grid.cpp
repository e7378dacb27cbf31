#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "subnav/distance.hpp"
#include "subnav/grid_io.hpp"
#include "subnav/raycast.hpp"
#include "test_util.hpp"

using namespace subnav;
using test::grid_from_rows;
using test::random_obstacle_grid;

namespace {

// Independent O(V^2) uniform-cost search used as the distance oracle.
std::vector<double> naive_distances(const SemanticGrid& map, Pose source, bool optimistic) {
  const int w = map.width(), h = map.height();
  auto trav = [&](int x, int y) {
    CellState s = map.at(x, y).state;
    return s == CellState::Free || (optimistic && s == CellState::Unknown);
  };
  std::vector<double> dist(static_cast<std::size_t>(w) * h, kUnreachable);
  std::vector<char> done(dist.size(), 0);
  if (!trav(source.x, source.y)) return dist;
  dist[map.index(source.x, source.y)] = 0;
  for (;;) {
    int best = -1;
    for (std::size_t i = 0; i < dist.size(); ++i)
      if (!done[i] && dist[i] != kUnreachable && (best < 0 || dist[i] < dist[best])) best = static_cast<int>(i);
    if (best < 0) break;
    done[best] = 1;
    int x = best % w, y = best / w;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        if ((dx | dy) == 0) continue;
        int nx = x + dx, ny = y + dy;
        if (nx < 0 || nx >= w || ny < 0 || ny >= h || !trav(nx, ny)) continue;
        if (dx != 0 && dy != 0 && (!trav(x, ny) || !trav(nx, y))) continue;
        double nd = dist[best] + ((dx != 0 && dy != 0) ? kSqrt2 : 1.0);
        if (nd < dist[map.index(nx, ny)]) dist[map.index(nx, ny)] = nd;
      }
  }
  return dist;
}

int chebyshev(Pose a, Pose b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

}  // namespace

TEST_SUITE_BEGIN("grid");

TEST_CASE("raycast reveals the full chebyshev disc on an empty map") {
  SemanticGrid g(11, 11, free_cell());
  Pose pose{5, 5};
  auto scan = raycast_scan(g, pose, 3, 360);
  std::set<std::pair<int, int>> revealed;
  for (const ScanHit& s : scan) revealed.insert({s.cell.x, s.cell.y});
  for (int y = 0; y < 11; ++y)
    for (int x = 0; x < 11; ++x) {
      bool expect = chebyshev(Pose{x, y}, pose) <= 3;
      CAPTURE(x);
      CAPTURE(y);
      CHECK(revealed.count({x, y}) == static_cast<std::size_t>(expect));
    }
}

TEST_CASE("raycast is occluded by a full-height wall") {
  SemanticGrid g(16, 9, free_cell());
  for (int y = 0; y < 9; ++y) g.at(5, y) = obstacle_cell();
  auto scan = raycast_scan(g, Pose{4, 4}, 10, 720);
  for (const ScanHit& s : scan) CHECK(s.cell.x <= 5);
  // the wall itself is revealed where rays hit it
  bool wall_seen = std::any_of(scan.begin(), scan.end(),
                               [](const ScanHit& s) { return s.cell.x == 5; });
  CHECK(wall_seen);
}

TEST_CASE("raycast degenerate range reveals only the pose cell") {
  SemanticGrid g(7, 7, free_cell());
  auto scan = raycast_scan(g, Pose{3, 3}, 0, 360);
  REQUIRE(scan.size() == 1);
  CHECK(scan[0].cell == Pose{3, 3});
}

TEST_CASE("raycast is deterministic") {
  std::mt19937_64 rng(7);
  SemanticGrid g = random_obstacle_grid(rng, 21, 17, 0.25);
  g.at(10, 8) = free_cell();
  auto a = raycast_scan(g, Pose{10, 8}, 6, 90);
  auto b = raycast_scan(g, Pose{10, 8}, 6, 90);
  CHECK(a == b);
}

TEST_CASE("fuse counts, idempotence, identity") {
  SemanticGrid truth(9, 9, free_cell());
  Belief b = Belief::initial(truth, Pose{4, 4});
  auto scan = raycast_scan(truth, Pose{4, 4}, 2, 360);
  fuse(b, scan);
  std::size_t revealed = b.map.cells().size() - b.map.count(CellState::Unknown);
  CHECK(revealed == scan.size());

  Belief twice = b;
  fuse(twice, scan);
  CHECK(twice.map == b.map);

  fuse(b, std::span<const ScanHit>{});
  CHECK(b.map == twice.map);
}

TEST_CASE("fuse flags contradictory reveals") {
  SemanticGrid truth(5, 5, free_cell());
  Belief b = Belief::initial(truth, Pose{2, 2});
  std::vector<ScanHit> scan{{Pose{1, 1}, free_cell(0)}};
  fuse(b, scan);
  std::vector<ScanHit> bad{{Pose{1, 1}, obstacle_cell(0)}};
  CHECK_THROWS_AS(fuse(b, bad), IntegrityError);
}

TEST_CASE("distance field on a straight corridor") {
  SemanticGrid g = grid_from_rows({
      "##########",
      "#........#",
      "##########",
  });
  DistanceField f = distance_field(g, Pose{1, 1}, false);
  CHECK(f.at(8, 1) == doctest::Approx(7.0).epsilon(1e-12));
  auto path = shortest_path(f, Pose{8, 1});
  REQUIRE(path.has_value());
  CHECK(path->size() == 8);
  CHECK(path_cost(*path) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("distance field diagonal metric") {
  SemanticGrid g(6, 6, free_cell());
  DistanceField f = distance_field(g, Pose{1, 1}, false);
  CHECK(f.at(4, 4) == doctest::Approx(3 * kSqrt2).epsilon(1e-9));
}

TEST_CASE("distance field matches the naive oracle on a gap-wall map") {
  SemanticGrid g = grid_from_rows({
      "##########",
      "#........#",
      "#........#",
      "####.#####",
      "#........#",
      "#........#",
      "#........#",
      "#........#",
      "#........#",
      "##########",
  });
  DistanceField f = distance_field(g, Pose{2, 1}, false);
  auto oracle = naive_distances(g, Pose{2, 1}, false);
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) {
      CAPTURE(x);
      CAPTURE(y);
      if (oracle[g.index(x, y)] == kUnreachable)
        CHECK(f.at(x, y) == kUnreachable);
      else
        CHECK(f.at(x, y) == doctest::Approx(oracle[g.index(x, y)]).epsilon(1e-9));
    }
  auto path = shortest_path(f, Pose{7, 8});
  REQUIRE(path.has_value());
  CHECK(path_cost(*path) == doctest::Approx(f.at(7, 8)).epsilon(1e-9));
}

TEST_CASE("no corner cutting through diagonal wall gaps") {
  SemanticGrid g = grid_from_rows({
      ".#",
      "#.",
  });
  // the only candidate move squeezes between two orthogonal obstacles
  DistanceField f = distance_field(g, Pose{0, 0}, false);
  CHECK(f.at(1, 1) == kUnreachable);
}

TEST_CASE("shortest path to the source is a single pose") {
  SemanticGrid g(4, 4, free_cell());
  DistanceField f = distance_field(g, Pose{2, 2}, false);
  auto path = shortest_path(f, Pose{2, 2});
  REQUIRE(path.has_value());
  CHECK(path->size() == 1);
  CHECK(!shortest_path(f, Pose{2, 2}).value().empty());
}

TEST_CASE("unreachable target yields an explicit no-path result") {
  SemanticGrid g = grid_from_rows({
      ".#.",
      ".#.",
      ".#.",
  });
  DistanceField f = distance_field(g, Pose{0, 0}, false);
  CHECK(!shortest_path(f, Pose{2, 0}).has_value());
}

TEST_CASE("distance properties on random maps") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    SemanticGrid g = random_obstacle_grid(rng, 15, 12, 0.3);
    // sprinkle unknowns to exercise the optimistic flag
    for (int k = 0; k < 20; ++k) {
      int x = static_cast<int>(rng() % 15), y = static_cast<int>(rng() % 12);
      g.at(x, y) = Cell{};
    }
    Pose a{static_cast<int>(rng() % 15), static_cast<int>(rng() % 12)};
    if (!g.is_free(a)) continue;

    DistanceField known = distance_field(g, a, false);
    DistanceField opt = distance_field(g, a, true);
    CHECK(known.at(a) == 0.0);

    for (int y = 0; y < 12; ++y)
      for (int x = 0; x < 15; ++x) {
        // optimistic dominance wherever both are reachable
        if (known.at(x, y) != kUnreachable && opt.at(x, y) != kUnreachable)
          CHECK(opt.at(x, y) <= known.at(x, y) + 1e-9);
        // symmetry: dist(a->b) == dist(b->a)
        if (g.is_free(x, y) && known.at(x, y) != kUnreachable && (rng() % 8) == 0) {
          DistanceField back = distance_field(g, Pose{x, y}, false);
          CHECK(back.at(a) == doctest::Approx(known.at(x, y)).epsilon(1e-9));
        }
      }
  }
}

TEST_CASE("belief stays consistent and monotone along a sensing walk") {
  std::mt19937_64 rng(99);
  SemanticGrid truth = random_obstacle_grid(rng, 25, 20, 0.2);
  Pose pose{12, 10};
  truth.at(pose) = free_cell();
  Belief b = Belief::initial(truth, pose);
  std::size_t unknown_before = b.map.count(CellState::Unknown);
  for (int step = 0; step < 60; ++step) {
    auto scan = raycast_scan(truth, b.pose, 5, 180);
    fuse(b, scan);
    std::size_t unknown_now = b.map.count(CellState::Unknown);
    CHECK(unknown_now <= unknown_before);
    unknown_before = unknown_now;
    for (int y = 0; y < 20; ++y)
      for (int x = 0; x < 25; ++x)
        if (!b.map.is_unknown(x, y)) REQUIRE(b.map.at(x, y) == truth.at(x, y));
    // random legal move
    for (int tries = 0; tries < 8; ++tries) {
      int dx = static_cast<int>(rng() % 3) - 1, dy = static_cast<int>(rng() % 3) - 1;
      Pose n{b.pose.x + dx, b.pose.y + dy};
      if (truth.in_bounds(n) && truth.is_free(n)) {
        b.pose = n;
        break;
      }
    }
  }
}

TEST_CASE("map text round trip is byte identical") {
  SemanticGrid g = grid_from_rows({
      "#######",
      "#r.b..#",
      "#..#..#",
      "#######",
  });
  MapDocument doc{g, Pose{1, 1}, Pose{5, 2}};
  std::string text = save_map_text(doc);
  MapDocument loaded = load_map_text(text);
  CHECK(loaded.grid == doc.grid);
  CHECK(loaded.start == doc.start);
  CHECK(loaded.goal == doc.goal);
  CHECK(save_map_text(loaded) == text);
}

TEST_CASE("map text parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(load_map_text("nonsense\n"), doctest::Contains("line 1"), ParseError);
  CHECK_THROWS_WITH_AS(load_map_text("2 2\nbadtoken\n..\n..\n"), doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_WITH_AS(load_map_text("2 2\n.=free:0\n..\n.\n"), doctest::Contains("line 4"), ParseError);
  CHECK_THROWS_WITH_AS(load_map_text("2 2\n.=free:0\n..\n.x\n"), doctest::Contains("line 4"), ParseError);
}

TEST_SUITE_END();
