#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace subnav::nn {

// Dense row-major matrix of doubles.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
  std::size_t size() const { return a.size(); }
};

// A named trainable tensor; gradients are accumulated by Tape::backward.
struct Param {
  std::string name;
  Mat value;
  Mat grad;

  void zero_grad() { grad = Mat(value.rows, value.cols); }
};

// Reverse-mode automatic differentiation over matrix operations. Nodes are
// recorded in construction order, which is already topological.
class Tape {
 public:
  using Ref = int;

  Ref input(Mat m) { return push(std::move(m), {}); }

  Ref param(Param& p) {
    Ref r = push(p.value, {});
    bindings_.push_back({r, &p});
    return r;
  }

  // C = A * B^T  (A: n x k, B: m x k -> n x m)
  Ref matmul_nt(Ref a, Ref b);
  Ref add(Ref a, Ref b);
  Ref mul(Ref a, Ref b);
  Ref add_rowvec(Ref m, Ref row);
  Ref concat_cols(Ref a, Ref b);
  Ref slice_cols(Ref m, int c0, int c1);
  Ref gather_rows(Ref m, std::vector<int> idx);
  Ref scatter_add_rows(Ref m, std::vector<int> idx, int out_rows);
  Ref relu(Ref a);
  Ref leaky_relu(Ref a, double slope);
  Ref scale(Ref a, double s);
  Ref scale_rows(Ref m, Ref col);
  Ref sum_all(Ref a);
  // Softmax over rows sharing a segment id (column vector input).
  Ref segment_softmax(Ref logits, std::vector<int> seg, int n_seg);
  // Per-row weighted binary cross entropy from logits: y=1 rows weighted by wpos.
  Ref bce_logits(Ref z, Mat y, Mat wpos);
  // Per-row gated absolute error |pred - target| * gate.
  Ref l1_gated(Ref pred, Mat target, Mat gate);

  const Mat& val(Ref r) const { return nodes_[r].val; }
  const Mat& grad(Ref r) const { return nodes_[r].grad; }

  void backward(Ref loss);

 private:
  struct Node {
    Mat val;
    Mat grad;
    std::function<void()> back;
  };

  Ref push(Mat val, std::function<void()> back) {
    nodes_.push_back(Node{std::move(val), {}, std::move(back)});
    return static_cast<Ref>(nodes_.size() - 1);
  }

  std::vector<Node> nodes_;
  std::vector<std::pair<Ref, Param*>> bindings_;
};

inline double sigmoid(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }
inline double softplus(double z) { return std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0); }

}  // namespace subnav::nn
