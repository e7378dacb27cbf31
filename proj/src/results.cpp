#include "subnav/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace subnav {

namespace {

std::string fmt_cost(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string results_to_csv(const ResultsFile& results) {
  std::ostringstream os;
  os << "# config_hash=" << results.config_hash << '\n';
  os << "planner,env,seed,net_cost,steps,reached_goal\n";
  for (const ResultRow& r : results.rows)
    os << r.planner << ',' << r.env << ',' << r.seed << ',' << fmt_cost(r.net_cost) << ',' << r.steps
       << ',' << (r.reached_goal ? 1 : 0) << '\n';
  return os.str();
}

ResultsFile results_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  ResultsFile out;
  if (!std::getline(is, line) || line.rfind("# config_hash=", 0) != 0)
    throw std::runtime_error("results csv missing config hash header");
  out.config_hash = line.substr(std::string("# config_hash=").size());
  if (!std::getline(is, line) || line != "planner,env,seed,net_cost,steps,reached_goal")
    throw std::runtime_error("results csv missing column header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != 6) throw std::runtime_error("bad results row: " + line);
    ResultRow r;
    r.planner = f[0];
    r.env = f[1];
    r.seed = std::stoull(f[2]);
    r.net_cost = std::stod(f[3]);
    r.steps = std::stoi(f[4]);
    r.reached_goal = f[5] == "1";
    out.rows.push_back(std::move(r));
  }
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::map<std::string, SummaryRow> acc;
  for (const ResultRow& r : rows) {
    SummaryRow& s = acc[r.planner];
    s.planner = r.planner;
    s.trials += 1;
    s.mean_cost += r.net_cost;
    s.reach_rate += r.reached_goal ? 1.0 : 0.0;
  }
  std::vector<SummaryRow> out;
  for (auto& [_, s] : acc) {
    s.mean_cost /= s.trials;
    s.reach_rate /= s.trials;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return a.mean_cost != b.mean_cost ? a.mean_cost < b.mean_cost : a.planner < b.planner;
  });
  return out;
}

std::string render_summary_table(const std::vector<SummaryRow>& summary) {
  std::ostringstream os;
  os << "planner            trials  mean_cost  reach_rate\n";
  for (const SummaryRow& s : summary) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-18s %6d %10.2f %11.3f\n", s.planner.c_str(), s.trials,
                  s.mean_cost, s.reach_rate);
    os << buf;
  }
  return os.str();
}

PairComparison compare_planners(const std::vector<ResultRow>& rows, const std::string& a,
                                const std::string& b) {
  std::map<std::pair<std::string, std::uint64_t>, double> cost_a, cost_b;
  for (const ResultRow& r : rows) {
    if (r.planner == a) cost_a[{r.env, r.seed}] = r.net_cost;
    if (r.planner == b) cost_b[{r.env, r.seed}] = r.net_cost;
  }
  PairComparison c;
  c.planner_a = a;
  c.planner_b = b;
  double sum_a = 0, sum_b = 0;
  int n = 0;
  for (const auto& [key, ca] : cost_a) {
    auto it = cost_b.find(key);
    if (it == cost_b.end()) continue;
    ++n;
    sum_a += ca;
    sum_b += it->second;
    if (ca < it->second - 1e-9)
      ++c.wins_a;
    else if (it->second < ca - 1e-9)
      ++c.wins_b;
    else
      ++c.ties;
  }
  c.mean_ratio = (n > 0 && sum_b > 0) ? sum_a / sum_b : 0.0;
  return c;
}

std::string scatter_csv(const std::vector<ResultRow>& rows, const std::string& a, const std::string& b) {
  std::map<std::pair<std::string, std::uint64_t>, std::pair<double, double>> pairs;
  std::set<std::pair<std::string, std::uint64_t>> have_a, have_b;
  for (const ResultRow& r : rows) {
    if (r.planner == a) {
      pairs[{r.env, r.seed}].first = r.net_cost;
      have_a.insert({r.env, r.seed});
    }
    if (r.planner == b) {
      pairs[{r.env, r.seed}].second = r.net_cost;
      have_b.insert({r.env, r.seed});
    }
  }
  std::ostringstream os;
  os << "env,seed,cost_" << a << ",cost_" << b << '\n';
  for (const auto& [key, costs] : pairs) {
    if (!have_a.count(key) || !have_b.count(key)) continue;
    os << key.first << ',' << key.second << ',' << fmt_cost(costs.first) << ',' << fmt_cost(costs.second)
       << '\n';
  }
  return os.str();
}

}  // namespace subnav
