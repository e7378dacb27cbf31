#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subnav/nn/tape.hpp"
#include "subnav/topograph.hpp"

namespace subnav::nn {

inline constexpr int kHidden = 8;
inline constexpr int kOutputs = 3;  // P_S logit, R_S, R_E

struct DenseLayer {
  Param W;  // out x in
  Param b;  // 1 x out
};

struct AttnLayer {
  Param Wa;   // hidden x (2*hidden [+1])
  Param ba;   // 1 x hidden
  Param att;  // 1 x hidden
  Param Wm;   // hidden x (hidden [+1])
  Param bm;   // 1 x hidden
};

// Per-node encoder (3 dense layers), 4 message-passing layers (attention
// for the gnn variant, per-node dense for the local variant), and a linear
// 3-output head.
struct Model {
  enum class Variant : std::uint8_t { Gnn = 0, Local = 1 };

  Variant variant = Variant::Gnn;
  bool edge_features = true;  // concat edge length into attention/message inputs
  std::vector<DenseLayer> encoder;
  std::vector<AttnLayer> attn;
  std::vector<DenseLayer> local_mid;
  DenseLayer head;

  int input_dim() const { return variant == Variant::Gnn ? kNodeFeatureDim : kNodeFeatureDim + 1; }
  std::vector<Param*> params();
  std::vector<const Param*> params() const;

  static Model make(Variant variant, std::uint64_t init_seed, bool edge_features = true);
};

// Node matrix, directed edge lists with self loops, and normalized edge
// features, as consumed by the network.
struct GraphInput {
  Mat x;
  std::vector<int> src;
  std::vector<int> dst;
  Mat efeat;    // directed edge count x 1
  double diag;  // distance normalizer (map diagonal)
  std::vector<int> subgoal_nodes;
};

GraphInput make_input(const TopoGraph& graph, Model::Variant variant, double diag);

struct Prediction {
  // Raw per-node outputs; consumers apply sigmoid to column 0 and clamp
  // denormalized costs at zero.
  Mat out;  // n x 3
};

Prediction forward(const Model& model, const TopoGraph& graph, double diag);

struct PropertyEstimate {
  double p_success = 0;
  double success_cost = 0;
  double exploration_cost = 0;
};

// Sigmoid + denormalization applied to one subgoal node row.
PropertyEstimate decode_prediction(const Prediction& pred, int node, double diag);

// Builds the forward pass on an existing tape; returns the n x 3 output ref.
Tape::Ref run_model(Tape& tape, Model& model, const GraphInput& in);

struct LossSpec {
  std::vector<int> subgoal_nodes;
  std::vector<double> y_ps;       // {0,1}
  std::vector<double> y_rs_norm;  // normalized by diag
  std::vector<double> y_re_norm;
  double ce_pos_weight = 1.0;
  double cost_scale = 1.0;
};

// Masked subgoal loss: weighted cross entropy on the success logit plus
// gated L1 terms on the normalized costs, averaged over subgoal nodes.
Tape::Ref masked_loss(Tape& tape, Tape::Ref node_out, const LossSpec& spec);

struct ModelIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path, std::optional<Model::Variant> expect = {});

}  // namespace subnav::nn
