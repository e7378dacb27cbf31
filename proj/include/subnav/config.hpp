#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subnav/navigate.hpp"

namespace subnav {

// Fully explicit experiment description; the defaulted dump is stored next
// to every results file and hashed so replays can detect drift.
struct ExperimentConfig {
  std::string env = "j_intersection";  // j_intersection | parallel_hallway | floorplan
  std::string floorplan_path;          // env == floorplan only
  std::vector<std::string> planners = {"fully_known", "optimistic", "lsp_gnn", "lsp_local"};
  std::uint64_t seed_begin = 10000;
  std::uint64_t seed_end = 10100;  // exclusive

  int sensor_range = 20;
  int n_rays = 360;
  double budget_factor = 20.0;
  int max_exact = 10;
  double failure_cost_factor = 10.0;

  std::vector<std::string> model_paths;  // variant read from each file header
  std::string out_dir = "out";
  int jobs = 1;

  // dataset generation
  int datagen_trials = 400;
  std::uint64_t datagen_seed0 = 0;
  int datagen_stride = 5;

  // training
  int train_steps = 15000;
  double train_lr0 = 1e-3;
  double train_decay = 0.6;
  int train_decay_interval = 3000;
  double train_ce_weight = 0.0;  // <=0: auto
  double train_cost_scale = 1.0;
  std::uint64_t train_seed = 1;
  bool train_edge_features = true;

  std::string to_json() const;               // canonical, fully defaulted dump
  static ExperimentConfig from_json(const std::string& text);
  std::string hash() const;                  // fnv-1a of the canonical dump

  NavConfig nav_config() const;
};

}  // namespace subnav
