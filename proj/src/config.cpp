#include "subnav/config.hpp"

#include <cstdio>

#include <json.hpp>

#include "subnav/frontier.hpp"

namespace subnav {

using json = nlohmann::json;  // object keys sorted, canonical dump

std::string ExperimentConfig::to_json() const {
  json j;
  j["env"] = env;
  j["floorplan_path"] = floorplan_path;
  j["planners"] = planners;
  j["seed_begin"] = seed_begin;
  j["seed_end"] = seed_end;
  j["sensor_range"] = sensor_range;
  j["n_rays"] = n_rays;
  j["budget_factor"] = budget_factor;
  j["max_exact"] = max_exact;
  j["failure_cost_factor"] = failure_cost_factor;
  j["model_paths"] = model_paths;
  j["out_dir"] = out_dir;
  j["jobs"] = jobs;
  j["datagen_trials"] = datagen_trials;
  j["datagen_seed0"] = datagen_seed0;
  j["datagen_stride"] = datagen_stride;
  j["train_steps"] = train_steps;
  j["train_lr0"] = train_lr0;
  j["train_decay"] = train_decay;
  j["train_decay_interval"] = train_decay_interval;
  j["train_ce_weight"] = train_ce_weight;
  j["train_cost_scale"] = train_cost_scale;
  j["train_seed"] = train_seed;
  j["train_edge_features"] = train_edge_features;
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig c;
  c.env = j.value("env", c.env);
  c.floorplan_path = j.value("floorplan_path", c.floorplan_path);
  if (j.contains("planners")) c.planners = j["planners"].get<std::vector<std::string>>();
  c.seed_begin = j.value("seed_begin", c.seed_begin);
  c.seed_end = j.value("seed_end", c.seed_end);
  c.sensor_range = j.value("sensor_range", c.sensor_range);
  c.n_rays = j.value("n_rays", c.n_rays);
  c.budget_factor = j.value("budget_factor", c.budget_factor);
  c.max_exact = j.value("max_exact", c.max_exact);
  c.failure_cost_factor = j.value("failure_cost_factor", c.failure_cost_factor);
  if (j.contains("model_paths")) c.model_paths = j["model_paths"].get<std::vector<std::string>>();
  c.out_dir = j.value("out_dir", c.out_dir);
  c.jobs = j.value("jobs", c.jobs);
  c.datagen_trials = j.value("datagen_trials", c.datagen_trials);
  c.datagen_seed0 = j.value("datagen_seed0", c.datagen_seed0);
  c.datagen_stride = j.value("datagen_stride", c.datagen_stride);
  c.train_steps = j.value("train_steps", c.train_steps);
  c.train_lr0 = j.value("train_lr0", c.train_lr0);
  c.train_decay = j.value("train_decay", c.train_decay);
  c.train_decay_interval = j.value("train_decay_interval", c.train_decay_interval);
  c.train_ce_weight = j.value("train_ce_weight", c.train_ce_weight);
  c.train_cost_scale = j.value("train_cost_scale", c.train_cost_scale);
  c.train_seed = j.value("train_seed", c.train_seed);
  c.train_edge_features = j.value("train_edge_features", c.train_edge_features);
  return c;
}

std::string ExperimentConfig::hash() const {
  std::string dump = to_json();
  std::uint64_t h = fnv1a(dump.data(), dump.size());
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

NavConfig ExperimentConfig::nav_config() const {
  NavConfig n;
  n.sensor_range = sensor_range;
  n.n_rays = n_rays;
  n.budget_factor = budget_factor;
  n.max_exact = max_exact;
  n.failure_cost_factor = failure_cost_factor;
  return n;
}

}  // namespace subnav
