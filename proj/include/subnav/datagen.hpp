#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subnav/navigate.hpp"
#include "subnav/topograph.hpp"

namespace subnav {

enum class EnvKind { JIntersection, ParallelHallway };

const char* env_name(EnvKind e);
EnvKind env_from_name(const std::string& name);
Scenario make_scenario(EnvKind env, std::uint64_t seed);

struct SubgoalLabel {
  int node = -1;    // subgoal node index in the record's graph
  double y_ps = 0;  // {0, 1}
  double y_rs = 0;  // cells, meaningful when y_ps = 1
  double y_re = 0;  // cells, meaningful when y_ps = 0
};

// One training example: a belief-derived graph snapshot plus ground-truth
// labels for its subgoal nodes.
struct Record {
  std::string env;
  std::uint64_t seed = 0;
  int step = 0;
  int width = 0;
  int height = 0;
  TopoGraph graph;
  std::vector<SubgoalLabel> labels;
};

using Dataset = std::vector<Record>;

std::vector<SubgoalLabel> label_subgoals(const SemanticGrid& truth, const Belief& belief,
                                         const std::vector<Frontier>& frontiers,
                                         const TopoGraph& graph, Pose goal);

struct DatagenOptions {
  int n_trials = 100;
  std::uint64_t seed0 = 0;
  int stride = 5;  // record every stride-th step
};

// Runs offline trials alternating the known-space driver (even trials) and
// the optimistic driver (odd trials), emitting one record per sampled
// replanning step. Deterministic given seed0.
void generate_dataset(EnvKind env, const DatagenOptions& opts, const NavConfig& nav,
                      const std::string& path);

Dataset load_dataset(const std::string& path);

std::string record_to_json(const Record& r);
Record record_from_json(const std::string& line);

}  // namespace subnav
