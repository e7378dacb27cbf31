#include "subnav/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <thread>

#include "subnav/datagen.hpp"
#include "subnav/grid_io.hpp"
#include "subnav/nn/train.hpp"
#include "subnav/raycast.hpp"
#include "subnav/svg.hpp"

namespace subnav {

namespace fs = std::filesystem;

namespace {

Scenario scenario_for(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.env == "floorplan") {
    Scenario s = load_floorplan(cfg.floorplan_path);
    s.seed = seed;
    return s;
  }
  return make_scenario(env_from_name(cfg.env), seed);
}

struct LoadedModels {
  std::vector<nn::Model> models;
  const nn::Model* gnn = nullptr;
  const nn::Model* local = nullptr;
};

LoadedModels load_models(const ExperimentConfig& cfg) {
  LoadedModels lm;
  lm.models.reserve(cfg.model_paths.size());
  for (const std::string& path : cfg.model_paths) {
    lm.models.push_back(nn::load_model(path));
    const nn::Model& m = lm.models.back();
    if (m.variant == nn::Model::Variant::Gnn)
      lm.gnn = &m;
    else
      lm.local = &m;
  }
  return lm;
}

}  // namespace

std::vector<ResultRow> run_eval_trials(const ExperimentConfig& cfg) {
  LoadedModels models = load_models(cfg);
  NavConfig nav = cfg.nav_config();
  nav.gnn_model = models.gnn;
  nav.local_model = models.local;

  std::vector<Policy> policies;
  for (const std::string& name : cfg.planners) {
    Policy p = policy_from_name(name);
    // Abort before any trial when a learned planner has no model.
    if (p == Policy::LspGnn && !nav.gnn_model) throw NoModelError("planner lsp_gnn listed but no gnn model loaded");
    if (p == Policy::LspLocal && !nav.local_model) throw NoModelError("planner lsp_local listed but no local model loaded");
    policies.push_back(p);
  }

  struct Job {
    Policy policy;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (Policy p : policies)
    for (std::uint64_t s = cfg.seed_begin; s < cfg.seed_end; ++s) jobs.push_back({p, s});

  std::vector<ResultRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      NavConfig trial_nav = nav;
      trial_nav.random_policy_seed = jobs[i].seed;
      Scenario scenario = scenario_for(cfg, jobs[i].seed);
      TrialResult r = navigate(scenario, jobs[i].policy, trial_nav);
      rows[i] = ResultRow{r.planner, cfg.env, r.seed, r.net_cost, r.steps, r.reached_goal};
    }
  };
  int n_threads = std::max(1, cfg.jobs);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;  // already in deterministic (planner, seed) order
}

int cmd_gen_maps(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  for (std::uint64_t s = cfg.seed_begin; s < cfg.seed_end; ++s) {
    Scenario scenario = scenario_for(cfg, s);
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%06llu.map", cfg.env.c_str(), static_cast<unsigned long long>(s));
    write_text_file((fs::path(cfg.out_dir) / name).string(), save_scenario_text(scenario));
  }
  std::cout << "wrote " << (cfg.seed_end - cfg.seed_begin) << " maps to " << cfg.out_dir << "\n";
  return 0;
}

int cmd_gen_data(const ExperimentConfig& cfg, const std::string& out_file) {
  if (cfg.env == "floorplan") throw std::invalid_argument("gen-data supports procedural environments only");
  DatagenOptions opts;
  opts.n_trials = cfg.datagen_trials;
  opts.seed0 = cfg.datagen_seed0;
  opts.stride = cfg.datagen_stride;
  generate_dataset(env_from_name(cfg.env), opts, cfg.nav_config(), out_file);
  std::cout << "dataset written to " << out_file << "\n";
  return 0;
}

int cmd_train(const ExperimentConfig& cfg, const std::string& dataset_file, const std::string& variant,
              const std::string& out_file) {
  nn::Model::Variant v;
  if (variant == "gnn")
    v = nn::Model::Variant::Gnn;
  else if (variant == "local")
    v = nn::Model::Variant::Local;
  else
    throw std::invalid_argument("variant must be gnn or local");

  Dataset ds = load_dataset(dataset_file);
  nn::TrainConfig tc;
  tc.steps = cfg.train_steps;
  tc.lr0 = cfg.train_lr0;
  tc.decay = cfg.train_decay;
  tc.decay_interval = cfg.train_decay_interval;
  tc.ce_weight = cfg.train_ce_weight;
  tc.cost_scale = cfg.train_cost_scale;
  tc.seed = cfg.train_seed;
  tc.edge_features = cfg.train_edge_features;

  std::vector<nn::TrainLogEntry> log;
  nn::Model model = nn::train(ds, v, tc, &log);
  nn::save_model(model, out_file);

  std::string curve = "step,loss,lr\n";
  for (const auto& e : log) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.8f\n", e.step, e.loss, e.lr);
    curve += buf;
  }
  write_text_file(out_file + ".losscurve.csv", curve);
  std::cout << "trained " << variant << " on " << ds.size() << " records; model written to " << out_file
            << "\n";
  return 0;
}

int cmd_eval(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  std::vector<ResultRow> rows = run_eval_trials(cfg);

  ResultsFile rf{cfg.hash(), rows};
  write_text_file((fs::path(cfg.out_dir) / "results.csv").string(), results_to_csv(rf));
  write_text_file((fs::path(cfg.out_dir) / "config.json").string(), cfg.to_json());

  auto summary = summarize(rows);
  std::string table = render_summary_table(summary);
  write_text_file((fs::path(cfg.out_dir) / "summary.txt").string(), table);
  std::cout << table;

  auto print_ratio = [&](const std::string& a, const std::string& b) {
    PairComparison c = compare_planners(rows, a, b);
    if (c.wins_a + c.wins_b + c.ties == 0) return;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s / %s mean ratio: %.4f (wins %d, losses %d, ties %d)\n",
                  a.c_str(), b.c_str(), c.mean_ratio, c.wins_a, c.wins_b, c.ties);
    std::cout << buf;
  };
  for (const std::string& p : cfg.planners) {
    if (p != "fully_known") print_ratio(p, "fully_known");
    if (p != "optimistic") print_ratio(p, "optimistic");
  }
  return 0;
}

int cmd_replay(const ExperimentConfig& cfg, const std::string& results_csv, const std::string& planner,
               std::uint64_t seed, const std::string& out_svg) {
  ResultsFile rf = results_from_csv(read_text_file(results_csv));
  if (rf.config_hash != cfg.hash())
    throw std::runtime_error("config drift: results were produced with config hash " + rf.config_hash +
                             " but the current config hashes to " + cfg.hash());

  const ResultRow* row = nullptr;
  for (const ResultRow& r : rf.rows)
    if (r.planner == planner && r.seed == seed) row = &r;
  if (!row) throw std::runtime_error("no such trial in results: " + planner + " seed " + std::to_string(seed));

  LoadedModels models = load_models(cfg);
  NavConfig nav = cfg.nav_config();
  nav.gnn_model = models.gnn;
  nav.local_model = models.local;
  nav.random_policy_seed = seed;

  Scenario scenario = scenario_for(cfg, seed);
  TrialResult r = navigate(scenario, policy_from_name(planner), nav);
  if (std::abs(r.net_cost - row->net_cost) > 1e-6)
    throw std::runtime_error("replayed cost differs from recorded cost; refusing to render");

  // Rebuild the final belief for unknown shading.
  Belief belief = Belief::initial(scenario.truth, scenario.start);
  for (Pose p : r.trajectory) {
    belief.pose = p;
    auto scan = raycast_scan(scenario.truth, p, nav.sensor_range, nav.n_rays);
    fuse(belief, scan);
  }
  write_text_file(out_svg, render_trajectory_svg(scenario.truth, belief.map, r.trajectory,
                                                 scenario.start, scenario.goal));
  std::cout << "replay written to " << out_svg << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& results_files, const std::string& out_dir) {
  if (results_files.empty()) throw std::invalid_argument("report needs at least one results file");
  fs::create_directories(out_dir);

  std::vector<ResultRow> rows;
  for (const std::string& f : results_files) {
    ResultsFile rf = results_from_csv(read_text_file(f));
    rows.insert(rows.end(), rf.rows.begin(), rf.rows.end());
  }

  // Restrict to seeds shared by every planner, warning when sets differ.
  std::map<std::string, std::set<std::pair<std::string, std::uint64_t>>> seeds_by_planner;
  for (const ResultRow& r : rows) seeds_by_planner[r.planner].insert({r.env, r.seed});
  std::set<std::pair<std::string, std::uint64_t>> shared;
  bool first = true, mismatch = false;
  for (const auto& [_, s] : seeds_by_planner) {
    if (first) {
      shared = s;
      first = false;
    } else {
      if (s != shared) mismatch = true;
      std::set<std::pair<std::string, std::uint64_t>> inter;
      std::set_intersection(s.begin(), s.end(), shared.begin(), shared.end(),
                            std::inserter(inter, inter.begin()));
      shared = std::move(inter);
    }
  }
  if (mismatch) {
    std::cerr << "warning: planners cover different seed sets; restricting to the intersection ("
              << shared.size() << " trials)\n";
    std::erase_if(rows, [&](const ResultRow& r) { return !shared.count({r.env, r.seed}); });
  }

  auto summary = summarize(rows);
  std::string table = render_summary_table(summary);
  std::cout << table;
  write_text_file((fs::path(out_dir) / "report.txt").string(), table);

  for (std::size_t i = 0; i < summary.size(); ++i)
    for (std::size_t j = i + 1; j < summary.size(); ++j) {
      const std::string &a = summary[i].planner, &b = summary[j].planner;
      PairComparison c = compare_planners(rows, a, b);
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%s vs %s: wins %d / losses %d / ties %d, mean ratio %.4f\n",
                    a.c_str(), b.c_str(), c.wins_a, c.wins_b, c.ties, c.mean_ratio);
      std::cout << buf;
      write_text_file((fs::path(out_dir) / ("scatter_" + a + "_vs_" + b + ".csv")).string(),
                      scatter_csv(rows, a, b));
    }
  return 0;
}

}  // namespace subnav
