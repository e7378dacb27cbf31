#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subnav/grid_io.hpp"
#include "subnav/harness.hpp"

namespace {

// Seed range flag "A..B" (B exclusive).
void parse_seed_range(const std::string& text, std::uint64_t& begin, std::uint64_t& end) {
  auto pos = text.find("..");
  if (pos == std::string::npos) throw CLI::ValidationError("--seeds", "expected A..B");
  begin = std::stoull(text.substr(0, pos));
  end = std::stoull(text.substr(pos + 2));
  if (end <= begin) throw CLI::ValidationError("--seeds", "range is empty");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Navigation-under-uncertainty workbench"};
  app.require_subcommand(1);

  subnav::ExperimentConfig cfg;
  std::string config_path, seed_range;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
    sub->add_option("--env", cfg.env, "j_intersection | parallel_hallway | floorplan");
    sub->add_option("--floorplan", cfg.floorplan_path, "map file for --env floorplan");
    sub->add_option("--seeds", seed_range, "seed range A..B (B exclusive)");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--jobs", cfg.jobs, "worker threads");
    sub->add_option("--sensor-range", cfg.sensor_range, "sensor range in cells");
    sub->add_option("--n-rays", cfg.n_rays, "rays per scan");
  };

  auto* gen_maps = app.add_subcommand("gen-maps", "write scenario map files");
  add_common(gen_maps);

  std::string data_out = "dataset.jsonl";
  auto* gen_data = app.add_subcommand("gen-data", "generate a labeled training dataset");
  add_common(gen_data);
  gen_data->add_option("--trials", cfg.datagen_trials, "number of trials");
  gen_data->add_option("--seed0", cfg.datagen_seed0, "first trial seed");
  gen_data->add_option("--stride", cfg.datagen_stride, "record every stride-th step");
  gen_data->add_option("--data-out", data_out, "dataset output file");

  std::string dataset_file, variant = "gnn", model_out = "model.bin";
  auto* train = app.add_subcommand("train", "train a property estimator");
  add_common(train);
  train->add_option("--data", dataset_file, "dataset file")->required();
  train->add_option("--variant", variant, "gnn | local");
  train->add_option("--steps", cfg.train_steps, "training steps");
  train->add_option("--train-seed", cfg.train_seed, "initialization/shuffle seed");
  train->add_option("--decay-interval", cfg.train_decay_interval, "lr decay interval in steps");
  train->add_option("--model-out", model_out, "model output file");

  auto* eval = app.add_subcommand("eval", "run batched navigation trials");
  add_common(eval);
  eval->add_option("--planners", cfg.planners, "planner names")->delimiter(',');
  eval->add_option("--model", cfg.model_paths, "model file (repeatable; variant read from file)");

  std::string results_csv, replay_planner, out_svg = "replay.svg";
  std::uint64_t replay_seed = 0;
  auto* replay = app.add_subcommand("replay", "re-run one trial and render an SVG");
  add_common(replay);
  replay->add_option("--model", cfg.model_paths, "model file (repeatable)");
  replay->add_option("--results", results_csv, "results.csv from eval")->required();
  replay->add_option("--planner", replay_planner, "planner name")->required();
  replay->add_option("--seed", replay_seed, "trial seed")->required();
  replay->add_option("--svg-out", out_svg, "output SVG path");

  std::vector<std::string> report_files;
  std::string report_out = "report";
  auto* report = app.add_subcommand("report", "compare results files");
  report->add_option("--results", report_files, "results.csv files")->required();
  report->add_option("--out", report_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      // Re-parse so explicit flags take precedence over the file.
      cfg = subnav::ExperimentConfig::from_json(subnav::read_text_file(config_path));
      std::vector<std::string> args(argv + 1, argv + argc);
      app.clear();
      app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    }
    if (!seed_range.empty()) parse_seed_range(seed_range, cfg.seed_begin, cfg.seed_end);

    if (gen_maps->parsed()) return subnav::cmd_gen_maps(cfg);
    if (gen_data->parsed()) return subnav::cmd_gen_data(cfg, data_out);
    if (train->parsed()) return subnav::cmd_train(cfg, dataset_file, variant, model_out);
    if (eval->parsed()) return subnav::cmd_eval(cfg);
    if (replay->parsed()) return subnav::cmd_replay(cfg, results_csv, replay_planner, replay_seed, out_svg);
    if (report->parsed()) return subnav::cmd_report(report_files, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
