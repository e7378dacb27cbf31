#pragma once

#include <string>
#include <vector>

#include "subnav/config.hpp"
#include "subnav/results.hpp"

namespace subnav {

// Generated scenario files for inspection or external use.
int cmd_gen_maps(const ExperimentConfig& cfg);

// Offline labeled dataset for training.
int cmd_gen_data(const ExperimentConfig& cfg, const std::string& out_file);

// Trains one variant and writes the model file and a loss-curve log.
int cmd_train(const ExperimentConfig& cfg, const std::string& dataset_file, const std::string& variant,
              const std::string& out_file);

// Runs navigate for every (planner, seed), writes results.csv plus the
// config snapshot, prints the summary and paired ratios.
int cmd_eval(const ExperimentConfig& cfg);

// Deterministically re-runs one recorded trial and writes an SVG.
int cmd_replay(const ExperimentConfig& cfg, const std::string& results_csv, const std::string& planner,
               std::uint64_t seed, const std::string& out_svg);

// Merged comparison table, win/loss counts, and scatter CSVs.
int cmd_report(const std::vector<std::string>& results_files, const std::string& out_dir);

// Runs all (planner, seed) trials of an eval config; exposed for tests.
std::vector<ResultRow> run_eval_trials(const ExperimentConfig& cfg);

}  // namespace subnav
