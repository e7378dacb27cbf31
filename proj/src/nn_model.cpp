#include "subnav/nn/model.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <random>

namespace subnav::nn {

namespace {

constexpr char kMagic[8] = {'S', 'U', 'B', 'N', 'A', 'V', 'M', '\0'};
constexpr std::uint32_t kVersion = 1;

double f32(double v) { return static_cast<double>(static_cast<float>(v)); }

// Fan-in scaled uniform init; biases get the same range, which also keeps
// preactivations off the exact ReLU kink where finite differences and
// subgradients disagree.
Param make_param(std::string name, int rows, int cols, std::mt19937_64& rng, int fan_in) {
  Param p;
  p.name = std::move(name);
  p.value = Mat(rows, cols);
  double s = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-s, s);
  for (double& v : p.value.a) v = f32(dist(rng));
  p.zero_grad();
  return p;
}

DenseLayer make_dense(const std::string& name, int out, int in, std::mt19937_64& rng) {
  DenseLayer l;
  l.W = make_param(name + ".W", out, in, rng, in);
  l.b = make_param(name + ".b", 1, out, rng, in);
  return l;
}

Tape::Ref dense(Tape& t, DenseLayer& l, Tape::Ref x) {
  return t.add_rowvec(t.matmul_nt(x, t.param(l.W)), t.param(l.b));
}

}  // namespace

std::vector<Param*> Model::params() {
  std::vector<Param*> out;
  auto add = [&](DenseLayer& l) {
    out.push_back(&l.W);
    out.push_back(&l.b);
  };
  for (DenseLayer& l : encoder) add(l);
  for (AttnLayer& l : attn) {
    out.push_back(&l.Wa);
    out.push_back(&l.ba);
    out.push_back(&l.att);
    out.push_back(&l.Wm);
    out.push_back(&l.bm);
  }
  for (DenseLayer& l : local_mid) add(l);
  add(head);
  return out;
}

std::vector<const Param*> Model::params() const {
  auto mutable_params = const_cast<Model*>(this)->params();
  return {mutable_params.begin(), mutable_params.end()};
}

Model Model::make(Variant variant, std::uint64_t init_seed, bool edge_features) {
  Model m;
  m.variant = variant;
  m.edge_features = edge_features;
  std::mt19937_64 rng(init_seed);

  m.encoder.push_back(make_dense("enc0", kHidden, m.input_dim(), rng));
  m.encoder.push_back(make_dense("enc1", kHidden, kHidden, rng));
  m.encoder.push_back(make_dense("enc2", kHidden, kHidden, rng));

  if (variant == Variant::Gnn) {
    int edim = edge_features ? 1 : 0;
    for (int i = 0; i < 4; ++i) {
      AttnLayer l;
      std::string name = "attn" + std::to_string(i);
      l.Wa = make_param(name + ".Wa", kHidden, 2 * kHidden + edim, rng);
      l.ba = make_param(name + ".ba", 1, kHidden, rng, true);
      l.att = make_param(name + ".att", 1, kHidden, rng);
      l.Wm = make_param(name + ".Wm", kHidden, kHidden + edim, rng);
      l.bm = make_param(name + ".bm", 1, kHidden, rng, true);
      m.attn.push_back(std::move(l));
    }
  } else {
    for (int i = 0; i < 4; ++i) m.local_mid.push_back(make_dense("mid" + std::to_string(i), kHidden, kHidden, rng));
  }
  m.head = make_dense("head", kOutputs, kHidden, rng);
  return m;
}

GraphInput make_input(const TopoGraph& graph, Model::Variant variant, double diag) {
  GraphInput in;
  in.diag = diag;
  const int n = static_cast<int>(graph.nodes.size());
  const int fdim = variant == Model::Variant::Gnn ? kNodeFeatureDim : kNodeFeatureDim + 1;
  in.x = Mat(n, fdim);
  for (int i = 0; i < n; ++i) {
    for (int f = 0; f < kNodeFeatureDim; ++f) in.x.at(i, f) = graph.nodes[i].feature[f];
    if (variant == Model::Variant::Local) in.x.at(i, kNodeFeatureDim) = graph.nodes[i].dist_goal / diag;
    if (graph.nodes[i].kind == NodeKind::Subgoal) in.subgoal_nodes.push_back(i);
  }

  // Both directions of every edge plus a zero-length self loop per node,
  // sorted by (dst, src) for a stable layout.
  std::vector<std::array<double, 3>> dir;  // dst, src, feat
  dir.reserve(graph.edges.size() * 2 + n);
  for (const TopoEdge& e : graph.edges) {
    dir.push_back({double(e.v), double(e.u), e.length / diag});
    dir.push_back({double(e.u), double(e.v), e.length / diag});
  }
  for (int i = 0; i < n; ++i) dir.push_back({double(i), double(i), 0.0});
  std::sort(dir.begin(), dir.end());

  in.efeat = Mat(static_cast<int>(dir.size()), 1);
  for (std::size_t i = 0; i < dir.size(); ++i) {
    in.dst.push_back(static_cast<int>(dir[i][0]));
    in.src.push_back(static_cast<int>(dir[i][1]));
    in.efeat.at(static_cast<int>(i), 0) = dir[i][2];
  }
  return in;
}

Tape::Ref run_model(Tape& t, Model& m, const GraphInput& in) {
  if (in.x.cols != m.input_dim()) throw std::invalid_argument("run_model: node feature dimension mismatch");
  Tape::Ref h = t.input(in.x);
  for (DenseLayer& l : m.encoder) h = t.relu(dense(t, l, h));

  if (m.variant == Model::Variant::Gnn) {
    const int n = in.x.rows;
    Tape::Ref efeat = t.input(in.efeat);
    for (AttnLayer& l : m.attn) {
      Tape::Ref hs = t.gather_rows(h, in.src);
      Tape::Ref hd = t.gather_rows(h, in.dst);
      Tape::Ref score_in = t.concat_cols(hd, hs);
      if (m.edge_features) score_in = t.concat_cols(score_in, efeat);
      Tape::Ref s = t.leaky_relu(t.add_rowvec(t.matmul_nt(score_in, t.param(l.Wa)), t.param(l.ba)), 0.2);
      Tape::Ref logits = t.matmul_nt(s, t.param(l.att));
      Tape::Ref alpha = t.segment_softmax(logits, in.dst, n);
      Tape::Ref msg_in = m.edge_features ? t.concat_cols(hs, efeat) : hs;
      Tape::Ref msg = t.add_rowvec(t.matmul_nt(msg_in, t.param(l.Wm)), t.param(l.bm));
      h = t.relu(t.scatter_add_rows(t.scale_rows(msg, alpha), in.dst, n));
    }
  } else {
    for (DenseLayer& l : m.local_mid) h = t.relu(dense(t, l, h));
  }
  return dense(t, m.head, h);
}

Prediction forward(const Model& model, const TopoGraph& graph, double diag) {
  Model& m = const_cast<Model&>(model);  // tape reads values, grads untouched without backward
  GraphInput in = make_input(graph, model.variant, diag);
  Tape tape;
  Tape::Ref out = run_model(tape, m, in);
  return Prediction{tape.val(out)};
}

PropertyEstimate decode_prediction(const Prediction& pred, int node, double diag) {
  PropertyEstimate e;
  e.p_success = sigmoid(pred.out.at(node, 0));
  e.success_cost = std::max(0.0, pred.out.at(node, 1)) * diag;
  e.exploration_cost = std::max(0.0, pred.out.at(node, 2)) * diag;
  return e;
}

Tape::Ref masked_loss(Tape& t, Tape::Ref node_out, const LossSpec& spec) {
  const int k = static_cast<int>(spec.subgoal_nodes.size());
  if (k == 0) throw std::invalid_argument("masked_loss: no subgoal nodes");
  Tape::Ref sg = t.gather_rows(node_out, spec.subgoal_nodes);
  Mat y(k, 1), not_y(k, 1), wpos(k, 1), yrs(k, 1), yre(k, 1);
  for (int i = 0; i < k; ++i) {
    y.at(i, 0) = spec.y_ps[i];
    not_y.at(i, 0) = 1.0 - spec.y_ps[i];
    wpos.at(i, 0) = spec.ce_pos_weight;
    yrs.at(i, 0) = spec.y_rs_norm[i];
    yre.at(i, 0) = spec.y_re_norm[i];
  }
  Tape::Ref ce = t.bce_logits(t.slice_cols(sg, 0, 1), y, wpos);
  Tape::Ref l1_rs = t.l1_gated(t.slice_cols(sg, 1, 2), std::move(yrs), std::move(y));
  Tape::Ref l1_re = t.l1_gated(t.slice_cols(sg, 2, 3), std::move(yre), std::move(not_y));
  Tape::Ref cost_terms = t.scale(t.add(t.sum_all(l1_rs), t.sum_all(l1_re)), spec.cost_scale);
  return t.scale(t.add(t.sum_all(ce), cost_terms), 1.0 / k);
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ModelIoError("cannot open model file for writing: " + path);
  f.write(kMagic, sizeof(kMagic));
  auto u32 = [&](std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
  auto u8 = [&](std::uint8_t v) { f.write(reinterpret_cast<const char*>(&v), 1); };
  u32(kVersion);
  u8(static_cast<std::uint8_t>(model.variant));
  u8(model.edge_features ? 1 : 0);
  auto params = model.params();
  u32(static_cast<std::uint32_t>(params.size()));
  for (const Param* p : params) {
    u32(static_cast<std::uint32_t>(p->name.size()));
    f.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    u32(static_cast<std::uint32_t>(p->value.rows));
    u32(static_cast<std::uint32_t>(p->value.cols));
    for (double v : p->value.a) {
      float fv = static_cast<float>(v);
      f.write(reinterpret_cast<const char*>(&fv), 4);
    }
  }
  if (!f) throw ModelIoError("model write failed: " + path);
}

Model load_model(const std::string& path, std::optional<Model::Variant> expect) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ModelIoError("cannot open model file: " + path);
  char magic[8];
  if (!f.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw ModelIoError("not a model file (bad magic): " + path);
  auto u32 = [&] {
    std::uint32_t v = 0;
    if (!f.read(reinterpret_cast<char*>(&v), 4)) throw ModelIoError("truncated model file: " + path);
    return v;
  };
  auto u8 = [&] {
    std::uint8_t v = 0;
    if (!f.read(reinterpret_cast<char*>(&v), 1)) throw ModelIoError("truncated model file: " + path);
    return v;
  };
  if (u32() != kVersion) throw ModelIoError("unsupported model version: " + path);
  auto variant = static_cast<Model::Variant>(u8());
  if (variant != Model::Variant::Gnn && variant != Model::Variant::Local)
    throw ModelIoError("unknown model variant tag: " + path);
  if (expect && variant != *expect) throw ModelIoError("model variant mismatch: " + path);
  bool edge_features = u8() != 0;

  Model m = Model::make(variant, 0, edge_features);
  auto params = m.params();
  if (u32() != params.size()) throw ModelIoError("parameter count mismatch: " + path);
  for (Param* p : params) {
    std::uint32_t name_len = u32();
    std::string name(name_len, '\0');
    if (!f.read(name.data(), name_len)) throw ModelIoError("truncated model file: " + path);
    std::uint32_t rows = u32(), cols = u32();
    if (name != p->name || rows != static_cast<std::uint32_t>(p->value.rows) ||
        cols != static_cast<std::uint32_t>(p->value.cols))
      throw ModelIoError("layer shape table mismatch at " + p->name + ": " + path);
    for (double& v : p->value.a) {
      float fv = 0;
      if (!f.read(reinterpret_cast<char*>(&fv), 4)) throw ModelIoError("truncated model file: " + path);
      v = static_cast<double>(fv);
    }
  }
  return m;
}

}  // namespace subnav::nn
