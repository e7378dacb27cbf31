#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subnav/envgen.hpp"
#include "subnav/nn/model.hpp"
#include "subnav/planner.hpp"

namespace subnav {

enum class Policy { FullyKnown, Optimistic, LspGnn, LspLocal, LspOracle, LspRandom };

const char* policy_name(Policy p);
Policy policy_from_name(const std::string& name);

struct NavConfig {
  int sensor_range = 20;
  int n_rays = 360;
  double budget_factor = 20.0;       // step budget = factor * truth shortest cost
  int max_exact = 10;                // exact subset-DP limit
  double failure_cost_factor = 10.0; // failure cost = factor * map diagonal
  const nn::Model* gnn_model = nullptr;
  const nn::Model* local_model = nullptr;
  std::uint64_t random_policy_seed = 0;  // lsp_random property hashing
};

struct TrialResult {
  std::string planner;
  std::uint64_t seed = 0;
  double net_cost = 0.0;
  bool reached_goal = false;
  std::vector<Pose> trajectory;
  int steps = 0;
};

struct NoModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sense-plan-act loop: scan and fuse, go direct once the goal is revealed
// and reachable in known space, otherwise pick a frontier by minimum
// expected cost (learned policies) and step one cell toward it, replanning
// every step. FullyKnown descends the ground-truth field; Optimistic
// descends a field that treats unknown space as free and never uses the
// expected-cost recursion.
TrialResult navigate(const Scenario& scenario, Policy policy, const NavConfig& config);

}  // namespace subnav
