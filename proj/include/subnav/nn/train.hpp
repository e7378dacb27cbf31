#pragma once

#include <cstdint>
#include <vector>

#include "subnav/datagen.hpp"
#include "subnav/nn/model.hpp"

namespace subnav::nn {

struct TrainConfig {
  int steps = 50000;
  double lr0 = 1e-3;
  double decay = 0.6;          // multiplicative, applied every decay_interval steps
  int decay_interval = 10000;
  double ce_weight = 0.0;      // <= 0 derives #negative/#positive from the dataset
  double cost_scale = 1.0;
  std::uint64_t seed = 1;
  bool edge_features = true;
};

struct TrainLogEntry {
  int step = 0;
  double loss = 0.0;
  double lr = 0.0;
};

struct TrainingDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double lr_at(const TrainConfig& cfg, int step);

// Adam over one shuffled record per step with the stated learning-rate
// schedule. Parameters are kept on the 32-bit float grid so a save/load
// round trip is exact.
Model train(const Dataset& dataset, Model::Variant variant, const TrainConfig& cfg,
            std::vector<TrainLogEntry>* log = nullptr);

// Fraction of subgoal labels whose thresholded success logit matches.
double eval_ps_accuracy(const Model& model, const Dataset& dataset);

}  // namespace subnav::nn
