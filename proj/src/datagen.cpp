#include "subnav/datagen.hpp"

#include <fstream>

#include <json.hpp>

#include "subnav/distance.hpp"
#include "subnav/raycast.hpp"

namespace subnav {

using json = nlohmann::ordered_json;

const char* env_name(EnvKind e) {
  return e == EnvKind::JIntersection ? "j_intersection" : "parallel_hallway";
}

EnvKind env_from_name(const std::string& name) {
  if (name == "j_intersection") return EnvKind::JIntersection;
  if (name == "parallel_hallway") return EnvKind::ParallelHallway;
  throw std::invalid_argument("unknown environment: " + name);
}

Scenario make_scenario(EnvKind env, std::uint64_t seed) {
  return env == EnvKind::JIntersection ? gen_j_intersection(seed) : gen_parallel_hallway(seed);
}

std::vector<SubgoalLabel> label_subgoals(const SemanticGrid& truth, const Belief& belief,
                                         const std::vector<Frontier>& frontiers,
                                         const TopoGraph& graph, Pose goal) {
  std::vector<SubgoalLabel> labels;
  for (const Frontier& f : frontiers) {
    SubgoalProperties p = oracle_properties(truth, belief, f, goal);
    SubgoalLabel l;
    l.node = graph.subgoal_index.at(f.id);
    l.y_ps = p.p_success;
    l.y_rs = p.success_cost;
    l.y_re = p.exploration_cost;
    labels.push_back(l);
  }
  return labels;
}

std::string record_to_json(const Record& r) {
  json j;
  j["env"] = r.env;
  j["seed"] = r.seed;
  j["step"] = r.step;
  j["width"] = r.width;
  j["height"] = r.height;
  j["goal_node"] = r.graph.goal_node;
  json nodes = json::array();
  for (const TopoNode& n : r.graph.nodes) {
    json row = json::array({n.pos.x, n.pos.y, static_cast<int>(n.kind)});
    for (double f : n.feature) row.push_back(f);
    row.push_back(n.dist_goal);
    nodes.push_back(std::move(row));
  }
  j["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const TopoEdge& e : r.graph.edges) edges.push_back(json::array({e.u, e.v, e.length}));
  j["edges"] = std::move(edges);
  json labels = json::array();
  for (const SubgoalLabel& l : r.labels) labels.push_back(json::array({l.node, l.y_ps, l.y_rs, l.y_re}));
  j["labels"] = std::move(labels);
  return j.dump();
}

Record record_from_json(const std::string& line) {
  json j = json::parse(line);
  Record r;
  r.env = j.at("env").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.step = j.at("step").get<int>();
  r.width = j.at("width").get<int>();
  r.height = j.at("height").get<int>();
  r.graph.goal_node = j.at("goal_node").get<int>();
  for (const json& row : j.at("nodes")) {
    TopoNode n;
    n.pos = Pose{row.at(0).get<int>(), row.at(1).get<int>()};
    n.kind = static_cast<NodeKind>(row.at(2).get<int>());
    for (int f = 0; f < kNodeFeatureDim; ++f) n.feature[f] = row.at(3 + f).get<double>();
    n.dist_goal = row.at(3 + kNodeFeatureDim).get<double>();
    r.graph.nodes.push_back(n);
  }
  for (const json& row : j.at("edges"))
    r.graph.edges.push_back(TopoEdge{row.at(0).get<int>(), row.at(1).get<int>(), row.at(2).get<double>()});
  for (const json& row : j.at("labels"))
    r.labels.push_back(SubgoalLabel{row.at(0).get<int>(), row.at(1).get<double>(), row.at(2).get<double>(),
                                    row.at(3).get<double>()});
  return r;
}

void generate_dataset(EnvKind env, const DatagenOptions& opts, const NavConfig& nav,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open dataset file for writing: " + path);
  out << json{{"schema", "subnav-dataset"}, {"version", 1}}.dump() << '\n';

  for (int trial = 0; trial < opts.n_trials; ++trial) {
    const std::uint64_t seed = opts.seed0 + static_cast<std::uint64_t>(trial);
    Scenario scenario = make_scenario(env, seed);
    const bool optimistic_driver = (trial % 2) == 1;

    DistanceField truth_goal = distance_field(scenario.truth, scenario.goal, false);
    Belief belief = Belief::initial(scenario.truth, scenario.start);
    const int budget = static_cast<int>(std::ceil(nav.budget_factor * truth_goal.at(scenario.start)));

    DistanceField opt_goal;
    bool opt_valid = false;
    for (int step = 0; step < budget; ++step) {
      auto scan = raycast_scan(scenario.truth, belief.pose, nav.sensor_range, nav.n_rays);
      for (const ScanHit& hit : scan)
        if (belief.map.is_unknown(hit.cell)) {
          opt_valid = false;
          break;
        }
      fuse(belief, scan);
      if (belief.pose == scenario.goal) break;

      if (step % opts.stride == 0) {
        std::vector<Frontier> frontiers = extract_frontiers(belief);
        if (!frontiers.empty()) {
          Record r;
          r.env = env_name(env);
          r.seed = seed;
          r.step = step;
          r.width = scenario.truth.width();
          r.height = scenario.truth.height();
          r.graph = build_graph(belief, frontiers, scenario.goal);
          node_features(r.graph, belief);
          r.labels = label_subgoals(scenario.truth, belief, frontiers, r.graph, scenario.goal);
          out << record_to_json(r) << '\n';
        }
      }

      const DistanceField* field = &truth_goal;
      if (optimistic_driver) {
        if (!opt_valid) {
          opt_goal = distance_field(belief.map, scenario.goal, true);
          opt_valid = true;
        }
        field = &opt_goal;
      }
      if (!field->reachable(belief.pose)) break;
      std::int32_t pi = field->parent(belief.pose.x, belief.pose.y);
      belief.pose = Pose{pi % field->width(), pi / field->width()};
    }
  }
  if (!out) throw std::runtime_error("dataset write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
  json header = json::parse(line);
  if (header.value("schema", "") != "subnav-dataset" || header.value("version", 0) != 1)
    throw std::runtime_error("unsupported dataset schema: " + path);
  Dataset ds;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ds.push_back(record_from_json(line));
  }
  return ds;
}

}  // namespace subnav
