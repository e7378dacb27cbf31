#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "subnav/frontier.hpp"
#include "subnav/grid.hpp"

namespace subnav {

enum class NodeKind : std::uint8_t { Structural = 0, Subgoal = 1, Goal = 2 };

inline constexpr int kNodeFeatureDim = 6;

struct TopoNode {
  Pose pos;
  NodeKind kind = NodeKind::Structural;
  std::array<double, kNodeFeatureDim> feature{};  // [onehot x3, degree, is_subgoal, is_goal]
  double dist_goal = 0.0;                         // optimistic geodesic to the goal node
};

struct TopoEdge {
  int u = 0;
  int v = 0;
  double length = 0.0;  // optimistic geodesic between the endpoints
};

struct TopoGraph {
  std::vector<TopoNode> nodes;
  std::vector<TopoEdge> edges;
  std::map<std::uint64_t, int> subgoal_index;  // Frontier.id -> node index
  int goal_node = -1;

  int degree_excluding_goal(int node) const;
};

// Skeleton-based graph construction: mask unknown space as free with
// frontiers blocked except one point each, thin, trim to known space, nodes
// at junctions and endpoints, subgoal nodes linked to their nearest
// structural node, and a goal node connected to everything. When thinning
// yields no structural node (early steps), falls back to a star of
// {robot, subgoals, goal}.
TopoGraph build_graph(const Belief& belief, const std::vector<Frontier>& frontiers, Pose goal);

// Fills per-node features and dist_goal from the belief.
void node_features(TopoGraph& graph, const Belief& belief);

}  // namespace subnav
