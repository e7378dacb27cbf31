#pragma once

#include <optional>
#include <span>
#include <vector>

#include "subnav/frontier.hpp"
#include "subnav/grid.hpp"

namespace subnav {

struct SubgoalProperties {
  double p_success = 0.0;        // in [0, 1]
  double success_cost = 0.0;     // cells
  double exploration_cost = 0.0; // cells
};

// Everything the expected-cost recursion needs: known-space distances from
// the robot, the symmetric subgoal-to-subgoal distance matrix, property
// estimates, and the terminal cost paid when every subgoal fails.
struct PlanContext {
  std::vector<double> robot_to_subgoal;
  std::vector<std::vector<double>> subgoal_to_subgoal;
  std::vector<SubgoalProperties> properties;
  double failure_cost = 0.0;

  int size() const { return static_cast<int>(properties.size()); }
};

// Expected cost of committing to the given subgoal ordering:
//   Q = D(q,a1) + P1*Rs1 + (1-P1)*[Re1 + D(a1,a2) + P2*Rs2 + (1-P2)*[...]]
// with the terminal bracket equal to failure_cost once subgoals run out.
double expected_cost(const PlanContext& ctx, std::span<const int> ordering);

struct BestAction {
  int subgoal = -1;
  double q = 0.0;
  std::vector<double> per_first_q;  // optimal Q when forced to start at each subgoal
};

// Minimizes expected cost over ordered subgoal subsets via subset dynamic
// programming, exact up to max_exact subgoals; larger sets are restricted
// to the max_exact subgoals with the lowest D + P*Rs + (1-P)*Re score.
// Returns nullopt when the context has no subgoals.
std::optional<BestAction> best_action(const PlanContext& ctx, int max_exact = 10);

// Ground-truth subgoal properties: reachability, unknown-space distance to
// the goal, and round-trip cost to the farthest point beyond the frontier.
SubgoalProperties oracle_properties(const SemanticGrid& truth, const Belief& belief,
                                    const Frontier& frontier, Pose goal);

// Free cells 4-adjacent to the frontier, sorted by (y, x).
std::vector<Pose> frontier_adjacent_cells(const Frontier& frontier, const SemanticGrid& map);

}  // namespace subnav
