#include "subnav/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace subnav::nn {

namespace {

struct Adam {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::vector<Mat> m, v;
  long t = 0;

  void init(const std::vector<Param*>& params) {
    for (Param* p : params) {
      m.emplace_back(p->value.rows, p->value.cols);
      v.emplace_back(p->value.rows, p->value.cols);
    }
  }

  void step(const std::vector<Param*>& params, double lr) {
    ++t;
    double bc1 = 1.0 - std::pow(beta1, t);
    double bc2 = 1.0 - std::pow(beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
      Param& p = *params[i];
      for (std::size_t j = 0; j < p.value.size(); ++j) {
        double g = p.grad.a[j];
        m[i].a[j] = beta1 * m[i].a[j] + (1.0 - beta1) * g;
        v[i].a[j] = beta2 * v[i].a[j] + (1.0 - beta2) * g * g;
        double update = lr * (m[i].a[j] / bc1) / (std::sqrt(v[i].a[j] / bc2) + eps);
        // Stay on the float32 grid so serialization round trips exactly.
        p.value.a[j] = static_cast<double>(static_cast<float>(p.value.a[j] - update));
      }
    }
  }
};

LossSpec make_spec(const Record& r, double ce_weight, double cost_scale) {
  LossSpec spec;
  const double diag = std::hypot(static_cast<double>(r.width), static_cast<double>(r.height));
  for (const SubgoalLabel& l : r.labels) {
    spec.subgoal_nodes.push_back(l.node);
    spec.y_ps.push_back(l.y_ps);
    spec.y_rs_norm.push_back(l.y_rs / diag);
    spec.y_re_norm.push_back(l.y_re / diag);
  }
  spec.ce_pos_weight = ce_weight;
  spec.cost_scale = cost_scale;
  return spec;
}

}  // namespace

double lr_at(const TrainConfig& cfg, int step) {
  return cfg.lr0 * std::pow(cfg.decay, step / cfg.decay_interval);
}

Model train(const Dataset& dataset, Model::Variant variant, const TrainConfig& cfg,
            std::vector<TrainLogEntry>* log) {
  std::vector<const Record*> usable;
  long positives = 0, negatives = 0;
  for (const Record& r : dataset) {
    if (r.labels.empty()) continue;  // nothing to learn from
    usable.push_back(&r);
    for (const SubgoalLabel& l : r.labels) (l.y_ps > 0.5 ? positives : negatives) += 1;
  }
  if (usable.empty()) throw std::invalid_argument("train: dataset has no labeled records");

  double ce_weight = cfg.ce_weight;
  if (ce_weight <= 0.0)
    ce_weight = positives > 0 ? static_cast<double>(negatives) / static_cast<double>(positives) : 1.0;

  Model model = Model::make(variant, cfg.seed, cfg.edge_features);
  auto params = model.params();
  Adam adam;
  adam.init(params);

  std::mt19937_64 rng(cfg.seed ^ 0x5851f42d4c957f2dull);
  std::vector<std::size_t> order(usable.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  for (int step = 0; step < cfg.steps; ++step) {
    std::size_t pos = static_cast<std::size_t>(step) % order.size();
    if (pos == 0) std::shuffle(order.begin(), order.end(), rng);
    const Record& r = *usable[order[pos]];

    const double diag = std::hypot(static_cast<double>(r.width), static_cast<double>(r.height));
    GraphInput in = make_input(r.graph, variant, diag);
    Tape tape;
    Tape::Ref out = run_model(tape, model, in);
    Tape::Ref loss = masked_loss(tape, out, make_spec(r, ce_weight, cfg.cost_scale));
    double loss_value = tape.val(loss).at(0, 0);
    if (!std::isfinite(loss_value))
      throw TrainingDiverged("loss is not finite at step " + std::to_string(step) + " (seed " +
                             std::to_string(r.seed) + ", trial step " + std::to_string(r.step) + ")");

    for (Param* p : params) p->zero_grad();
    tape.backward(loss);
    adam.step(params, lr_at(cfg, step));

    if (log && (step % 100 == 0 || step + 1 == cfg.steps))
      log->push_back(TrainLogEntry{step, loss_value, lr_at(cfg, step)});
  }
  return model;
}

double eval_ps_accuracy(const Model& model, const Dataset& dataset) {
  long correct = 0, total = 0;
  for (const Record& r : dataset) {
    if (r.labels.empty()) continue;
    const double diag = std::hypot(static_cast<double>(r.width), static_cast<double>(r.height));
    Prediction pred = forward(model, r.graph, diag);
    for (const SubgoalLabel& l : r.labels) {
      bool predicted = pred.out.at(l.node, 0) > 0.0;  // sigmoid(z) > 0.5
      correct += (predicted == (l.y_ps > 0.5));
      ++total;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace subnav::nn
