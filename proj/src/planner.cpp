#include "subnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "subnav/distance.hpp"

namespace subnav {

double expected_cost(const PlanContext& ctx, std::span<const int> ordering) {
  if (ordering.empty()) throw std::invalid_argument("expected_cost: empty ordering");
  const int k = static_cast<int>(ordering.size());
  double acc = ctx.failure_cost;
  for (int i = k - 1; i >= 0; --i) {
    int a = ordering[i];
    const SubgoalProperties& p = ctx.properties[a];
    double tail = (i + 1 < k) ? ctx.subgoal_to_subgoal[a][ordering[i + 1]] + acc : acc;
    acc = p.p_success * p.success_cost + (1.0 - p.p_success) * (p.exploration_cost + tail);
  }
  return ctx.robot_to_subgoal[ordering[0]] + acc;
}

namespace {

// Cost-to-go after failing at `last` with `remaining` still unexplored.
// The planner may also abandon exploration and accept the failure cost,
// which matches exhaustive enumeration over ordered subsets.
double subset_value(const PlanContext& ctx, int last, unsigned remaining, std::vector<double>& memo,
                    const std::vector<int>& ids) {
  const int k = static_cast<int>(ids.size());
  double& slot = memo[static_cast<std::size_t>(last) * (1u << k) + remaining];
  if (slot == slot) return slot;  // already computed (NaN marks empty)
  double best = ctx.failure_cost;
  for (int j = 0; j < k; ++j) {
    if (!(remaining & (1u << j))) continue;
    int b = ids[j];
    const SubgoalProperties& p = ctx.properties[b];
    double v = ctx.subgoal_to_subgoal[ids[last]][b] + p.p_success * p.success_cost +
               (1.0 - p.p_success) *
                   (p.exploration_cost + subset_value(ctx, j, remaining & ~(1u << j), memo, ids));
    best = std::min(best, v);
  }
  slot = best;
  return best;
}

}  // namespace

std::optional<BestAction> best_action(const PlanContext& ctx, int max_exact) {
  const int n = ctx.size();
  if (n == 0) return std::nullopt;

  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  if (n > max_exact) {
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
      auto score = [&](int i) {
        const SubgoalProperties& p = ctx.properties[i];
        return ctx.robot_to_subgoal[i] + p.p_success * p.success_cost +
               (1.0 - p.p_success) * p.exploration_cost;
      };
      return score(a) < score(b);
    });
    ids.resize(max_exact);
    std::sort(ids.begin(), ids.end());
  }

  const int k = static_cast<int>(ids.size());
  std::vector<double> memo(static_cast<std::size_t>(k) << k, std::numeric_limits<double>::quiet_NaN());

  BestAction out;
  out.per_first_q.assign(n, std::numeric_limits<double>::infinity());
  const unsigned all = (1u << k) - 1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) {
    int a = ids[j];
    const SubgoalProperties& p = ctx.properties[a];
    double q = ctx.robot_to_subgoal[a] + p.p_success * p.success_cost +
               (1.0 - p.p_success) *
                   (p.exploration_cost + subset_value(ctx, j, all & ~(1u << j), memo, ids));
    out.per_first_q[a] = q;
    if (q < best) {
      best = q;
      out.subgoal = a;
    }
  }
  out.q = best;
  return out;
}

std::vector<Pose> frontier_adjacent_cells(const Frontier& frontier, const SemanticGrid& map) {
  std::vector<Pose> out;
  for (Pose p : frontier.cells) {
    const Pose nbrs[4] = {{p.x + 1, p.y}, {p.x - 1, p.y}, {p.x, p.y + 1}, {p.x, p.y - 1}};
    for (Pose n : nbrs)
      if (map.in_bounds(n) && map.is_free(n)) out.push_back(n);
  }
  std::sort(out.begin(), out.end(), [](Pose a, Pose b) { return std::pair(a.y, a.x) < std::pair(b.y, b.x); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SubgoalProperties oracle_properties(const SemanticGrid& truth, const Belief& belief,
                                    const Frontier& frontier, Pose goal) {
  const int w = truth.width(), h = truth.height();

  // Traversable for labeling: truth-free and still unknown in the belief.
  auto in_region = [&](int x, int y) {
    return truth.is_free(x, y) && belief.map.is_unknown(x, y);
  };

  std::vector<double> dist(static_cast<std::size_t>(w) * h, kUnreachable);
  using Entry = std::pair<double, std::int32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  for (Pose p : frontier.cells) {
    if (!in_region(p.x, p.y)) continue;
    dist[truth.index(p.x, p.y)] = 0.0;
    open.push({0.0, static_cast<std::int32_t>(truth.index(p.x, p.y))});
  }

  static constexpr int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  double farthest = 0.0;
  while (!open.empty()) {
    auto [d, idx] = open.top();
    open.pop();
    int x = idx % w, y = idx / w;
    if (d > dist[idx]) continue;
    farthest = std::max(farthest, d);
    for (int k = 0; k < 8; ++k) {
      int nx = x + dxs[k], ny = y + dys[k];
      if (nx < 0 || nx >= w || ny < 0 || ny >= h || !in_region(nx, ny)) continue;
      if (k >= 4 && (!in_region(x, ny) || !in_region(nx, y))) continue;
      double nd = d + (k >= 4 ? kSqrt2 : 1.0);
      std::size_t ni = truth.index(nx, ny);
      if (nd < dist[ni]) {
        dist[ni] = nd;
        open.push({nd, static_cast<std::int32_t>(ni)});
      }
    }
  }

  SubgoalProperties props;
  bool goal_in_region = belief.map.is_unknown(goal) && dist[truth.index(goal.x, goal.y)] != kUnreachable;
  props.p_success = goal_in_region ? 1.0 : 0.0;
  props.success_cost = goal_in_region ? dist[truth.index(goal.x, goal.y)] : 0.0;
  props.exploration_cost = 2.0 * farthest;
  return props;
}

}  // namespace subnav
