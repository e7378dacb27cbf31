#include "subnav/nn/tape.hpp"

#include <algorithm>
#include <stdexcept>

namespace subnav::nn {

namespace {

void check(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("tape shape error: ") + what);
}

}  // namespace

Tape::Ref Tape::matmul_nt(Ref a, Ref b) {
  const Mat& A = nodes_[a].val;
  const Mat& B = nodes_[b].val;
  check(A.cols == B.cols, "matmul_nt inner dimensions");
  Mat C(A.rows, B.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < B.rows; ++j) {
      double s = 0;
      for (int k = 0; k < A.cols; ++k) s += A.at(i, k) * B.at(j, k);
      C.at(i, j) = s;
    }
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, a, b] {
    const Mat& G = nodes_[r].grad;
    const Mat& A2 = nodes_[a].val;
    const Mat& B2 = nodes_[b].val;
    Mat& dA = nodes_[a].grad;
    Mat& dB = nodes_[b].grad;
    for (int i = 0; i < A2.rows; ++i)
      for (int j = 0; j < B2.rows; ++j) {
        double g = G.at(i, j);
        if (g == 0) continue;
        for (int k = 0; k < A2.cols; ++k) {
          dA.at(i, k) += g * B2.at(j, k);
          dB.at(j, k) += g * A2.at(i, k);
        }
      }
  };
  return r;
}

Tape::Ref Tape::add(Ref a, Ref b) {
  const Mat& A = nodes_[a].val;
  const Mat& B = nodes_[b].val;
  check(A.rows == B.rows && A.cols == B.cols, "add shapes");
  Mat C = A;
  for (std::size_t i = 0; i < C.size(); ++i) C.a[i] += B.a[i];
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, a, b] {
    for (std::size_t i = 0; i < nodes_[r].grad.size(); ++i) {
      nodes_[a].grad.a[i] += nodes_[r].grad.a[i];
      nodes_[b].grad.a[i] += nodes_[r].grad.a[i];
    }
  };
  return r;
}

Tape::Ref Tape::mul(Ref a, Ref b) {
  const Mat& A = nodes_[a].val;
  const Mat& B = nodes_[b].val;
  check(A.rows == B.rows && A.cols == B.cols, "mul shapes");
  Mat C = A;
  for (std::size_t i = 0; i < C.size(); ++i) C.a[i] *= B.a[i];
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, a, b] {
    for (std::size_t i = 0; i < nodes_[r].grad.size(); ++i) {
      nodes_[a].grad.a[i] += nodes_[r].grad.a[i] * nodes_[b].val.a[i];
      nodes_[b].grad.a[i] += nodes_[r].grad.a[i] * nodes_[a].val.a[i];
    }
  };
  return r;
}

Tape::Ref Tape::add_rowvec(Ref m, Ref row) {
  const Mat& M = nodes_[m].val;
  const Mat& R = nodes_[row].val;
  check(R.rows == 1 && R.cols == M.cols, "add_rowvec shapes");
  Mat C = M;
  for (int i = 0; i < C.rows; ++i)
    for (int j = 0; j < C.cols; ++j) C.at(i, j) += R.at(0, j);
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, m, row] {
    const Mat& G = nodes_[r].grad;
    for (int i = 0; i < G.rows; ++i)
      for (int j = 0; j < G.cols; ++j) {
        nodes_[m].grad.at(i, j) += G.at(i, j);
        nodes_[row].grad.at(0, j) += G.at(i, j);
      }
  };
  return r;
}

Tape::Ref Tape::concat_cols(Ref a, Ref b) {
  const Mat& A = nodes_[a].val;
  const Mat& B = nodes_[b].val;
  check(A.rows == B.rows, "concat_cols rows");
  Mat C(A.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) C.at(i, j) = A.at(i, j);
    for (int j = 0; j < B.cols; ++j) C.at(i, A.cols + j) = B.at(i, j);
  }
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, a, b] {
    const Mat& G = nodes_[r].grad;
    const int ac = nodes_[a].val.cols;
    for (int i = 0; i < G.rows; ++i) {
      for (int j = 0; j < ac; ++j) nodes_[a].grad.at(i, j) += G.at(i, j);
      for (int j = 0; j < nodes_[b].val.cols; ++j) nodes_[b].grad.at(i, j) += G.at(i, ac + j);
    }
  };
  return r;
}

Tape::Ref Tape::slice_cols(Ref m, int c0, int c1) {
  const Mat& M = nodes_[m].val;
  check(0 <= c0 && c0 < c1 && c1 <= M.cols, "slice_cols range");
  Mat C(M.rows, c1 - c0);
  for (int i = 0; i < M.rows; ++i)
    for (int j = c0; j < c1; ++j) C.at(i, j - c0) = M.at(i, j);
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, m, c0] {
    const Mat& G = nodes_[r].grad;
    for (int i = 0; i < G.rows; ++i)
      for (int j = 0; j < G.cols; ++j) nodes_[m].grad.at(i, c0 + j) += G.at(i, j);
  };
  return r;
}

Tape::Ref Tape::gather_rows(Ref m, std::vector<int> idx) {
  const Mat& M = nodes_[m].val;
  Mat C(static_cast<int>(idx.size()), M.cols);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (int j = 0; j < M.cols; ++j) C.at(static_cast<int>(i), j) = M.at(idx[i], j);
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, m, idx = std::move(idx)] {
    const Mat& G = nodes_[r].grad;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (int j = 0; j < G.cols; ++j) nodes_[m].grad.at(idx[i], j) += G.at(static_cast<int>(i), j);
  };
  return r;
}

Tape::Ref Tape::scatter_add_rows(Ref m, std::vector<int> idx, int out_rows) {
  const Mat& M = nodes_[m].val;
  check(static_cast<int>(idx.size()) == M.rows, "scatter_add_rows index count");
  Mat C(out_rows, M.cols);
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) C.at(idx[i], j) += M.at(i, j);
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, m, idx = std::move(idx)] {
    const Mat& G = nodes_[r].grad;
    for (int i = 0; i < nodes_[m].val.rows; ++i)
      for (int j = 0; j < G.cols; ++j) nodes_[m].grad.at(i, j) += G.at(idx[i], j);
  };
  return r;
}

Tape::Ref Tape::relu(Ref a) {
  Mat C = nodes_[a].val;
  for (double& v : C.a) v = std::max(v, 0.0);
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, a] {
    for (std::size_t i = 0; i < nodes_[r].grad.size(); ++i)
      if (nodes_[a].val.a[i] > 0) nodes_[a].grad.a[i] += nodes_[r].grad.a[i];
  };
  return r;
}

Tape::Ref Tape::leaky_relu(Ref a, double slope) {
  Mat C = nodes_[a].val;
  for (double& v : C.a) v = v > 0 ? v : slope * v;
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, a, slope] {
    for (std::size_t i = 0; i < nodes_[r].grad.size(); ++i)
      nodes_[a].grad.a[i] += nodes_[r].grad.a[i] * (nodes_[a].val.a[i] > 0 ? 1.0 : slope);
  };
  return r;
}

Tape::Ref Tape::scale(Ref a, double s) {
  Mat C = nodes_[a].val;
  for (double& v : C.a) v *= s;
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, a, s] {
    for (std::size_t i = 0; i < nodes_[r].grad.size(); ++i) nodes_[a].grad.a[i] += s * nodes_[r].grad.a[i];
  };
  return r;
}

Tape::Ref Tape::scale_rows(Ref m, Ref col) {
  const Mat& M = nodes_[m].val;
  const Mat& W = nodes_[col].val;
  check(W.cols == 1 && W.rows == M.rows, "scale_rows shapes");
  Mat C = M;
  for (int i = 0; i < C.rows; ++i)
    for (int j = 0; j < C.cols; ++j) C.at(i, j) *= W.at(i, 0);
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, m, col] {
    const Mat& G = nodes_[r].grad;
    const Mat& M2 = nodes_[m].val;
    const Mat& W2 = nodes_[col].val;
    for (int i = 0; i < G.rows; ++i)
      for (int j = 0; j < G.cols; ++j) {
        nodes_[m].grad.at(i, j) += G.at(i, j) * W2.at(i, 0);
        nodes_[col].grad.at(i, 0) += G.at(i, j) * M2.at(i, j);
      }
  };
  return r;
}

Tape::Ref Tape::sum_all(Ref a) {
  Mat C(1, 1);
  for (double v : nodes_[a].val.a) C.at(0, 0) += v;
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, a] {
    double g = nodes_[r].grad.at(0, 0);
    for (double& dv : nodes_[a].grad.a) dv += g;
  };
  return r;
}

Tape::Ref Tape::segment_softmax(Ref logits, std::vector<int> seg, int n_seg) {
  const Mat& Z = nodes_[logits].val;
  check(Z.cols == 1 && static_cast<int>(seg.size()) == Z.rows, "segment_softmax shapes");
  std::vector<double> mx(n_seg, -1e300), denom(n_seg, 0.0);
  for (int i = 0; i < Z.rows; ++i) mx[seg[i]] = std::max(mx[seg[i]], Z.at(i, 0));
  Mat C(Z.rows, 1);
  for (int i = 0; i < Z.rows; ++i) {
    C.at(i, 0) = std::exp(Z.at(i, 0) - mx[seg[i]]);
    denom[seg[i]] += C.at(i, 0);
  }
  for (int i = 0; i < Z.rows; ++i) C.at(i, 0) /= denom[seg[i]];
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, logits, seg = std::move(seg), n_seg] {
    const Mat& A = nodes_[r].val;
    const Mat& G = nodes_[r].grad;
    std::vector<double> dot(n_seg, 0.0);
    for (int i = 0; i < A.rows; ++i) dot[seg[i]] += A.at(i, 0) * G.at(i, 0);
    for (int i = 0; i < A.rows; ++i)
      nodes_[logits].grad.at(i, 0) += A.at(i, 0) * (G.at(i, 0) - dot[seg[i]]);
  };
  return r;
}

Tape::Ref Tape::bce_logits(Ref z, Mat y, Mat wpos) {
  const Mat& Z = nodes_[z].val;
  check(Z.cols == 1 && y.rows == Z.rows && wpos.rows == Z.rows, "bce_logits shapes");
  Mat C(Z.rows, 1);
  for (int i = 0; i < Z.rows; ++i) {
    double zi = Z.at(i, 0);
    C.at(i, 0) = wpos.at(i, 0) * y.at(i, 0) * softplus(-zi) + (1.0 - y.at(i, 0)) * softplus(zi);
  }
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, z, y = std::move(y), wpos = std::move(wpos)] {
    const Mat& Z2 = nodes_[z].val;
    const Mat& G = nodes_[r].grad;
    for (int i = 0; i < Z2.rows; ++i) {
      double zi = Z2.at(i, 0);
      double d = -wpos.at(i, 0) * y.at(i, 0) * sigmoid(-zi) + (1.0 - y.at(i, 0)) * sigmoid(zi);
      nodes_[z].grad.at(i, 0) += G.at(i, 0) * d;
    }
  };
  return r;
}

Tape::Ref Tape::l1_gated(Ref pred, Mat target, Mat gate) {
  const Mat& P = nodes_[pred].val;
  check(P.cols == 1 && target.rows == P.rows && gate.rows == P.rows, "l1_gated shapes");
  Mat C(P.rows, 1);
  for (int i = 0; i < P.rows; ++i) C.at(i, 0) = std::abs(P.at(i, 0) - target.at(i, 0)) * gate.at(i, 0);
  Ref r = push(std::move(C), {});
  nodes_[r].back = [this, r, pred, target = std::move(target), gate = std::move(gate)] {
    const Mat& P2 = nodes_[pred].val;
    const Mat& G = nodes_[r].grad;
    for (int i = 0; i < P2.rows; ++i) {
      double diff = P2.at(i, 0) - target.at(i, 0);
      double s = diff > 0 ? 1.0 : (diff < 0 ? -1.0 : 0.0);
      nodes_[pred].grad.at(i, 0) += G.at(i, 0) * s * gate.at(i, 0);
    }
  };
  return r;
}

void Tape::backward(Ref loss) {
  check(nodes_[loss].val.rows == 1 && nodes_[loss].val.cols == 1, "backward needs scalar loss");
  for (Node& n : nodes_) n.grad = Mat(n.val.rows, n.val.cols);
  nodes_[loss].grad.at(0, 0) = 1.0;
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i)
    if (nodes_[i].back) nodes_[i].back();
  for (auto& [ref, p] : bindings_) {
    if (p->grad.size() != p->value.size()) p->zero_grad();
    for (std::size_t i = 0; i < p->grad.size(); ++i) p->grad.a[i] += nodes_[ref].grad.a[i];
  }
}

}  // namespace subnav::nn
