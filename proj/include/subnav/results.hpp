#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subnav/navigate.hpp"

namespace subnav {

struct ResultRow {
  std::string planner;
  std::string env;
  std::uint64_t seed = 0;
  double net_cost = 0.0;
  int steps = 0;
  bool reached_goal = false;
};

struct ResultsFile {
  std::string config_hash;
  std::vector<ResultRow> rows;
};

std::string results_to_csv(const ResultsFile& results);
ResultsFile results_from_csv(const std::string& text);

struct SummaryRow {
  std::string planner;
  int trials = 0;
  double mean_cost = 0.0;
  double reach_rate = 0.0;
};

// Per-planner means, sorted by mean cost ascending.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);
std::string render_summary_table(const std::vector<SummaryRow>& summary);

struct PairComparison {
  std::string planner_a;
  std::string planner_b;
  int wins_a = 0;  // strictly lower cost on the shared seed
  int wins_b = 0;
  int ties = 0;
  double mean_ratio = 0.0;  // mean(cost_a) / mean(cost_b) over shared seeds
};

PairComparison compare_planners(const std::vector<ResultRow>& rows, const std::string& a,
                                const std::string& b);

// Per-seed (cost_a, cost_b) pairs as CSV for scatter plots.
std::string scatter_csv(const std::vector<ResultRow>& rows, const std::string& a, const std::string& b);

}  // namespace subnav
