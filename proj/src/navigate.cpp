#include "subnav/navigate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "subnav/distance.hpp"
#include "subnav/raycast.hpp"
#include "subnav/topograph.hpp"

namespace subnav {

const char* policy_name(Policy p) {
  switch (p) {
    case Policy::FullyKnown: return "fully_known";
    case Policy::Optimistic: return "optimistic";
    case Policy::LspGnn: return "lsp_gnn";
    case Policy::LspLocal: return "lsp_local";
    case Policy::LspOracle: return "lsp_oracle";
    case Policy::LspRandom: return "lsp_random";
  }
  return "?";
}

Policy policy_from_name(const std::string& name) {
  if (name == "fully_known") return Policy::FullyKnown;
  if (name == "optimistic") return Policy::Optimistic;
  if (name == "lsp_gnn") return Policy::LspGnn;
  if (name == "lsp_local") return Policy::LspLocal;
  if (name == "lsp_oracle") return Policy::LspOracle;
  if (name == "lsp_random") return Policy::LspRandom;
  throw std::invalid_argument("unknown planner name: " + name);
}

namespace {

double step_cost(Pose a, Pose b) {
  return (std::abs(a.x - b.x) + std::abs(a.y - b.y) == 2) ? kSqrt2 : 1.0;
}

// Next cell toward the goal along a goal-rooted field: the parent chain at
// the robot cell points back to the field source.
std::optional<Pose> descend(const DistanceField& goal_field, Pose robot) {
  if (!goal_field.reachable(robot) || robot == goal_field.source()) return std::nullopt;
  std::int32_t pi = goal_field.parent(robot.x, robot.y);
  return Pose{pi % goal_field.width(), pi / goal_field.width()};
}

double unit_from_hash(std::uint64_t h) {
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);  // 53-bit mantissa
}

// Belief-derived planning state reused while no new cell is revealed.
struct LspCache {
  std::size_t revision = static_cast<std::size_t>(-1);
  std::vector<Frontier> frontiers;
  TopoGraph graph;
  std::vector<SubgoalProperties> props;
  std::vector<Pose> canonical_cell;              // per frontier, robot-independent
  std::vector<std::vector<Pose>> adjacent;       // per frontier
  std::map<int, DistanceField> known_fields;     // canonical-cell Dijkstras, keyed by frontier idx
  std::map<int, DistanceField> optimistic_fields;
  DistanceField known_goal_field;                // goal-rooted, Free cells only
  bool goal_known_reachable = false;
};

std::vector<SubgoalProperties> estimate_properties(Policy policy, const NavConfig& cfg,
                                                   const Scenario& scenario, const Belief& belief,
                                                   const std::vector<Frontier>& frontiers,
                                                   const TopoGraph& graph) {
  const double diag = belief.map.diagonal();
  std::vector<SubgoalProperties> props(frontiers.size());
  switch (policy) {
    case Policy::LspOracle:
      for (std::size_t i = 0; i < frontiers.size(); ++i)
        props[i] = oracle_properties(scenario.truth, belief, frontiers[i], scenario.goal);
      break;
    case Policy::LspRandom:
      for (std::size_t i = 0; i < frontiers.size(); ++i) {
        std::uint64_t key[2] = {frontiers[i].id, cfg.random_policy_seed};
        std::uint64_t h = fnv1a(key, sizeof(key));
        props[i].p_success = unit_from_hash(h);
        props[i].success_cost = unit_from_hash(h * 0x9e3779b97f4a7c15ull + 1) * diag;
        props[i].exploration_cost = unit_from_hash(h * 0xbf58476d1ce4e5b9ull + 2) * diag;
      }
      break;
    case Policy::LspGnn:
    case Policy::LspLocal: {
      const nn::Model* model = policy == Policy::LspGnn ? cfg.gnn_model : cfg.local_model;
      if (!model) throw NoModelError(std::string("no model loaded for planner ") + policy_name(policy));
      nn::Prediction pred = nn::forward(*model, graph, diag);
      for (std::size_t i = 0; i < frontiers.size(); ++i) {
        int node = graph.subgoal_index.at(frontiers[i].id);
        nn::PropertyEstimate e = nn::decode_prediction(pred, node, diag);
        props[i] = SubgoalProperties{e.p_success, e.success_cost, e.exploration_cost};
      }
      break;
    }
    default: break;
  }
  return props;
}

}  // namespace

TrialResult navigate(const Scenario& scenario, Policy policy, const NavConfig& cfg) {
  if (policy == Policy::LspGnn && !cfg.gnn_model) throw NoModelError("lsp_gnn requires a loaded gnn model");
  if (policy == Policy::LspLocal && !cfg.local_model) throw NoModelError("lsp_local requires a loaded local model");

  TrialResult result;
  result.planner = policy_name(policy);
  result.seed = scenario.seed;

  const SemanticGrid& truth = scenario.truth;
  DistanceField truth_goal_field = distance_field(truth, scenario.goal, false);
  if (!truth_goal_field.reachable(scenario.start))
    throw std::invalid_argument("navigate: goal unreachable in ground truth");
  const double shortest = truth_goal_field.at(scenario.start);
  const int budget = std::max(100, static_cast<int>(std::ceil(cfg.budget_factor * shortest)));
  const double diag = truth.diagonal();

  Belief belief = Belief::initial(truth, scenario.start);
  result.trajectory.push_back(belief.pose);

  LspCache cache;
  std::size_t revision = 0;
  DistanceField optimistic_goal_field;
  std::size_t optimistic_goal_revision = static_cast<std::size_t>(-1);

  while (result.steps < budget) {
    auto scan = raycast_scan(truth, belief.pose, cfg.sensor_range, cfg.n_rays);
    for (const ScanHit& hitv : scan)
      if (belief.map.is_unknown(hitv.cell)) {
        ++revision;  // any newly revealed cell invalidates belief-derived caches
        break;
      }
    fuse(belief, scan);

    if (belief.pose == scenario.goal) {
      result.reached_goal = true;
      break;
    }

    std::optional<Pose> next;
    if (policy == Policy::FullyKnown) {
      next = descend(truth_goal_field, belief.pose);
    } else if (policy == Policy::Optimistic) {
      if (optimistic_goal_revision != revision) {
        optimistic_goal_field = distance_field(belief.map, scenario.goal, true);
        optimistic_goal_revision = revision;
      }
      next = descend(optimistic_goal_field, belief.pose);
    } else {
      if (cache.revision != revision) {
        cache.revision = revision;
        cache.frontiers = extract_frontiers(belief);
        cache.known_fields.clear();
        cache.optimistic_fields.clear();
        cache.known_goal_field = distance_field(belief.map, scenario.goal, false);
        cache.goal_known_reachable = !belief.map.is_unknown(scenario.goal);
        cache.adjacent.clear();
        cache.canonical_cell.clear();
        for (const Frontier& f : cache.frontiers) {
          cache.adjacent.push_back(frontier_adjacent_cells(f, belief.map));
          Pose canon = f.mask_point;
          double best = 1e300;
          for (Pose a : cache.adjacent.back()) {
            double d = std::hypot(double(a.x - f.mask_point.x), double(a.y - f.mask_point.y));
            if (d < best - 1e-12) {
              best = d;
              canon = a;
            }
          }
          cache.canonical_cell.push_back(canon);
        }
        if (!cache.frontiers.empty()) {
          cache.graph = build_graph(belief, cache.frontiers, scenario.goal);
          node_features(cache.graph, belief);
          cache.props = estimate_properties(policy, cfg, scenario, belief, cache.frontiers, cache.graph);
        } else {
          cache.graph = TopoGraph{};
          cache.props.clear();
        }
      }

      if (cache.goal_known_reachable && cache.known_goal_field.reachable(belief.pose)) {
        next = descend(cache.known_goal_field, belief.pose);
      } else if (!cache.frontiers.empty()) {
        DistanceField robot_field = distance_field(belief.map, belief.pose, false);
        std::optional<DistanceField> robot_opt_field;

        const int n = static_cast<int>(cache.frontiers.size());
        std::vector<double> d_robot(n, kUnreachable);
        std::vector<char> via_optimistic(n, 0);
        for (int i = 0; i < n; ++i) {
          for (Pose a : cache.adjacent[i]) d_robot[i] = std::min(d_robot[i], robot_field.at(a));
          if (d_robot[i] == kUnreachable) {
            if (!robot_opt_field) robot_opt_field = distance_field(belief.map, belief.pose, true);
            double d = robot_opt_field->at(cache.frontiers[i].mask_point);
            if (d != kUnreachable) {
              d_robot[i] = d;
              via_optimistic[i] = 1;
            }
          }
        }

        std::vector<int> usable;
        for (int i = 0; i < n; ++i)
          if (d_robot[i] != kUnreachable) usable.push_back(i);

        if (!usable.empty()) {
          // Prune before paying for pairwise distance fields.
          if (static_cast<int>(usable.size()) > cfg.max_exact) {
            std::stable_sort(usable.begin(), usable.end(), [&](int a, int b) {
              auto score = [&](int i) {
                const SubgoalProperties& p = cache.props[i];
                return d_robot[i] + p.p_success * p.success_cost +
                       (1.0 - p.p_success) * p.exploration_cost;
              };
              return score(a) < score(b);
            });
            usable.resize(cfg.max_exact);
            std::sort(usable.begin(), usable.end());
          }

          auto known_field_for = [&](int i) -> const DistanceField& {
            auto it = cache.known_fields.find(i);
            if (it == cache.known_fields.end())
              it = cache.known_fields.emplace(i, distance_field(belief.map, cache.canonical_cell[i], false)).first;
            return it->second;
          };
          auto optimistic_field_for = [&](int i) -> const DistanceField& {
            auto it = cache.optimistic_fields.find(i);
            if (it == cache.optimistic_fields.end())
              it = cache.optimistic_fields.emplace(i, distance_field(belief.map, cache.canonical_cell[i], true)).first;
            return it->second;
          };

          const int k = static_cast<int>(usable.size());
          PlanContext ctx;
          ctx.failure_cost = cfg.failure_cost_factor * diag;
          ctx.robot_to_subgoal.resize(k);
          ctx.properties.resize(k);
          ctx.subgoal_to_subgoal.assign(k, std::vector<double>(k, 0.0));
          for (int a = 0; a < k; ++a) {
            ctx.robot_to_subgoal[a] = d_robot[usable[a]];
            ctx.properties[a] = cache.props[usable[a]];
          }
          for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b) {
              int i = usable[a], j = usable[b];
              double d = known_field_for(i).at(cache.canonical_cell[j]);
              if (d == kUnreachable) d = optimistic_field_for(i).at(cache.canonical_cell[j]);
              if (d == kUnreachable)
                d = std::hypot(double(cache.canonical_cell[i].x - cache.canonical_cell[j].x),
                               double(cache.canonical_cell[i].y - cache.canonical_cell[j].y));
              ctx.subgoal_to_subgoal[a][b] = ctx.subgoal_to_subgoal[b][a] = d;
            }

          auto action = best_action(ctx, cfg.max_exact);
          int chosen = usable[action->subgoal];

          if (via_optimistic[chosen]) {
            if (!robot_opt_field) robot_opt_field = distance_field(belief.map, belief.pose, true);
            auto path = shortest_path(*robot_opt_field, cache.frontiers[chosen].mask_point);
            if (path && path->size() >= 2) next = (*path)[1];
          } else {
            Pose target = cache.adjacent[chosen].front();
            double best = kUnreachable;
            for (Pose a : cache.adjacent[chosen]) {
              double d = robot_field.at(a);
              if (d < best) {
                best = d;
                target = a;
              }
            }
            auto path = shortest_path(robot_field, target);
            if (path && path->size() >= 2) next = (*path)[1];
          }
        }
      }
    }

    if (!next) break;  // no viable action; budget/selection exhausted
    result.net_cost += step_cost(belief.pose, *next);
    belief.pose = *next;
    result.trajectory.push_back(belief.pose);
    ++result.steps;
  }

  return result;
}

}  // namespace subnav
