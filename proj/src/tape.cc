// src/tape.cc

// Copyright 2026  SAS toolkit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "sas/nn/tape.h"

#include <cmath>

namespace sas {
namespace nn {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double stable_softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

int Tape::push(Mat value, bool requires_grad, std::function<void(Tape&)> back) {
  require(!swept_, "tape already swept, create a fresh tape");
  Node n;
  n.value = std::move(value);
  n.requires_grad = grad_enabled_ && requires_grad;
  if (n.requires_grad) n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

Mat& Tape::grad_ref(int id) {
  Node& n = nodes_[static_cast<size_t>(id)];
  if (n.grad.size() == 0) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  return n.grad;
}

bool Tape::has_grad(int id) const {
  return nodes_[static_cast<size_t>(id)].grad.size() != 0;
}

const Mat& Tape::grad(int id) const {
  const Node& n = nodes_[static_cast<size_t>(id)];
  require(n.grad.size() != 0, "node has no gradient (not swept or detached)");
  return n.grad;
}

int Tape::constant(Mat v) { return push(std::move(v), false, nullptr); }

int Tape::param(Param& p) {
  auto it = param_ids_.find(&p);
  if (it != param_ids_.end()) return it->second;
  int id = push(p.value, true, nullptr);
  if (grad_enabled_) param_nodes_.emplace_back(id, &p);
  param_ids_.emplace(&p, id);
  return id;
}

int Tape::matmul(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.cols() == B.rows(), "matmul: inner dimensions differ");
  int out = push(A * B, rg(a) || rg(b), nullptr);
  if (rg(a) || rg(b)) {
    bool ga = rg(a), gb = rg(b);
    nodes_[static_cast<size_t>(out)].back = [a, b, ga, gb, out](Tape& t) {
      const Mat& G = t.grad(out);
      if (ga) t.grad_ref(a) += G * t.value(b).transpose();
      if (gb) t.grad_ref(b) += t.value(a).transpose() * G;
    };
  }
  return out;
}

int Tape::transpose(int a) {
  int out = push(value(a).transpose(), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      t.grad_ref(a) += t.grad(out).transpose();
    };
  }
  return out;
}

int Tape::add(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.rows() == B.rows() && A.cols() == B.cols(), "add: shape mismatch");
  int out = push(A + B, rg(a) || rg(b), nullptr);
  if (rg(a) || rg(b)) {
    bool ga = rg(a), gb = rg(b);
    nodes_[static_cast<size_t>(out)].back = [a, b, ga, gb, out](Tape& t) {
      const Mat& G = t.grad(out);
      if (ga) t.grad_ref(a) += G;
      if (gb) t.grad_ref(b) += G;
    };
  }
  return out;
}

int Tape::sub(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.rows() == B.rows() && A.cols() == B.cols(), "sub: shape mismatch");
  int out = push(A - B, rg(a) || rg(b), nullptr);
  if (rg(a) || rg(b)) {
    bool ga = rg(a), gb = rg(b);
    nodes_[static_cast<size_t>(out)].back = [a, b, ga, gb, out](Tape& t) {
      const Mat& G = t.grad(out);
      if (ga) t.grad_ref(a) += G;
      if (gb) t.grad_ref(b) -= G;
    };
  }
  return out;
}

int Tape::mul(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(A.rows() == B.rows() && A.cols() == B.cols(), "mul: shape mismatch");
  int out = push(A.cwiseProduct(B), rg(a) || rg(b), nullptr);
  if (rg(a) || rg(b)) {
    bool ga = rg(a), gb = rg(b);
    nodes_[static_cast<size_t>(out)].back = [a, b, ga, gb, out](Tape& t) {
      const Mat& G = t.grad(out);
      if (ga) t.grad_ref(a) += G.cwiseProduct(t.value(b));
      if (gb) t.grad_ref(b) += G.cwiseProduct(t.value(a));
    };
  }
  return out;
}

int Tape::scale(int a, double s) {
  int out = push(value(a) * s, rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, s, out](Tape& t) {
      t.grad_ref(a) += s * t.grad(out);
    };
  }
  return out;
}

int Tape::add_rowvec(int a, int b) {
  const Mat& A = value(a);
  const Mat& B = value(b);
  require(B.rows() == 1 && B.cols() == A.cols(), "add_rowvec: b must be 1 x cols(a)");
  Mat y = A.rowwise() + B.row(0);
  int out = push(std::move(y), rg(a) || rg(b), nullptr);
  if (rg(a) || rg(b)) {
    bool ga = rg(a), gb = rg(b);
    nodes_[static_cast<size_t>(out)].back = [a, b, ga, gb, out](Tape& t) {
      const Mat& G = t.grad(out);
      if (ga) t.grad_ref(a) += G;
      if (gb) t.grad_ref(b) += G.colwise().sum();
    };
  }
  return out;
}

int Tape::mul_const(int a, const Mat& m) {
  const Mat& A = value(a);
  require(A.rows() == m.rows() && A.cols() == m.cols(), "mul_const: shape mismatch");
  int out = push(A.cwiseProduct(m), rg(a), nullptr);
  if (rg(a)) {
    Mat mc = m;
    nodes_[static_cast<size_t>(out)].back = [a, mc, out](Tape& t) {
      t.grad_ref(a) += t.grad(out).cwiseProduct(mc);
    };
  }
  return out;
}

int Tape::hcat(const std::vector<int>& parts) {
  require(!parts.empty(), "hcat: empty part list");
  Eigen::Index rows = value(parts[0]).rows();
  Eigen::Index cols = 0;
  bool any = false;
  for (int p : parts) {
    require(value(p).rows() == rows, "hcat: row count mismatch");
    cols += value(p).cols();
    any = any || rg(p);
  }
  Mat y(rows, cols);
  Eigen::Index off = 0;
  for (int p : parts) {
    y.middleCols(off, value(p).cols()) = value(p);
    off += value(p).cols();
  }
  int out = push(std::move(y), any, nullptr);
  if (any) {
    std::vector<int> ps = parts;
    nodes_[static_cast<size_t>(out)].back = [ps, out](Tape& t) {
      const Mat& G = t.grad(out);
      Eigen::Index o = 0;
      for (int p : ps) {
        Eigen::Index c = t.value(p).cols();
        if (t.rg(p)) t.grad_ref(p) += G.middleCols(o, c);
        o += c;
      }
    };
  }
  return out;
}

int Tape::vcat(const std::vector<int>& parts) {
  require(!parts.empty(), "vcat: empty part list");
  Eigen::Index cols = value(parts[0]).cols();
  Eigen::Index rows = 0;
  bool any = false;
  for (int p : parts) {
    require(value(p).cols() == cols, "vcat: column count mismatch");
    rows += value(p).rows();
    any = any || rg(p);
  }
  Mat y(rows, cols);
  Eigen::Index off = 0;
  for (int p : parts) {
    y.middleRows(off, value(p).rows()) = value(p);
    off += value(p).rows();
  }
  int out = push(std::move(y), any, nullptr);
  if (any) {
    std::vector<int> ps = parts;
    nodes_[static_cast<size_t>(out)].back = [ps, out](Tape& t) {
      const Mat& G = t.grad(out);
      Eigen::Index o = 0;
      for (int p : ps) {
        Eigen::Index r = t.value(p).rows();
        if (t.rg(p)) t.grad_ref(p) += G.middleRows(o, r);
        o += r;
      }
    };
  }
  return out;
}

int Tape::slice_cols(int a, int start, int n) {
  const Mat& A = value(a);
  require(start >= 0 && n >= 1 && start + n <= A.cols(), "slice_cols: out of range");
  int out = push(A.middleCols(start, n), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, start, n, out](Tape& t) {
      t.grad_ref(a).middleCols(start, n) += t.grad(out);
    };
  }
  return out;
}

int Tape::slice_rows(int a, int start, int n) {
  const Mat& A = value(a);
  require(start >= 0 && n >= 1 && start + n <= A.rows(), "slice_rows: out of range");
  int out = push(A.middleRows(start, n), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, start, n, out](Tape& t) {
      t.grad_ref(a).middleRows(start, n) += t.grad(out);
    };
  }
  return out;
}

int Tape::reverse_rows(int a) {
  int out = push(value(a).colwise().reverse(), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      t.grad_ref(a) += t.grad(out).colwise().reverse();
    };
  }
  return out;
}

int Tape::relu(int a) {
  const Mat& A = value(a);
  int out = push(A.cwiseMax(0.0), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      const Mat& A2 = t.value(a);
      t.grad_ref(a).array() +=
          t.grad(out).array() * (A2.array() > 0.0).cast<double>();
    };
  }
  return out;
}

int Tape::tanh_(int a) {
  Mat y = value(a).array().tanh();
  int out = push(std::move(y), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      const Mat& Y = t.value(out);
      t.grad_ref(a).array() += t.grad(out).array() * (1.0 - Y.array().square());
    };
  }
  return out;
}

int Tape::sigmoid(int a) {
  Mat y = value(a).unaryExpr([](double x) { return stable_sigmoid(x); });
  int out = push(std::move(y), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      const Mat& Y = t.value(out);
      t.grad_ref(a).array() +=
          t.grad(out).array() * Y.array() * (1.0 - Y.array());
    };
  }
  return out;
}

int Tape::exp_(int a) {
  Mat y = value(a).array().exp();
  int out = push(std::move(y), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      t.grad_ref(a).array() += t.grad(out).array() * t.value(out).array();
    };
  }
  return out;
}

int Tape::log_(int a) {
  Mat y = value(a).array().log();
  int out = push(std::move(y), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      t.grad_ref(a).array() += t.grad(out).array() / t.value(a).array();
    };
  }
  return out;
}

int Tape::softplus(int a) {
  Mat y = value(a).unaryExpr([](double x) { return stable_softplus(x); });
  int out = push(std::move(y), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      Mat s = t.value(a).unaryExpr([](double x) { return stable_sigmoid(x); });
      t.grad_ref(a).array() += t.grad(out).array() * s.array();
    };
  }
  return out;
}

int Tape::square(int a) {
  Mat y = value(a).array().square();
  int out = push(std::move(y), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      t.grad_ref(a).array() += 2.0 * t.grad(out).array() * t.value(a).array();
    };
  }
  return out;
}

int Tape::sum(int a) {
  Mat y(1, 1);
  y(0, 0) = value(a).sum();
  int out = push(std::move(y), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      t.grad_ref(a).array() += t.grad(out)(0, 0);
    };
  }
  return out;
}

int Tape::mean_rows(int a) {
  const Mat& A = value(a);
  require(A.rows() >= 1, "mean_rows: empty input");
  Mat y = A.colwise().mean();
  int out = push(std::move(y), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      const Mat& G = t.grad(out);
      double inv = 1.0 / static_cast<double>(t.value(a).rows());
      t.grad_ref(a) += G.replicate(t.value(a).rows(), 1) * inv;
    };
  }
  return out;
}

int Tape::softmax_rows(int a) {
  const Mat& A = value(a);
  Mat y(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double m = A.row(i).maxCoeff();
    Eigen::ArrayXd e = (A.row(i).array() - m).exp();
    y.row(i) = (e / e.sum()).matrix();
  }
  int out = push(std::move(y), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      const Mat& Y = t.value(out);
      const Mat& G = t.grad(out);
      Mat rowdot = (G.cwiseProduct(Y)).rowwise().sum();
      Mat dx = Y.array() * (G.array().colwise() - rowdot.col(0).array());
      t.grad_ref(a) += dx;
    };
  }
  return out;
}

int Tape::logsumexp_rows(int a, const Mat& mask01) {
  const Mat& A = value(a);
  require(A.rows() == mask01.rows() && A.cols() == mask01.cols(),
          "logsumexp_rows: mask shape mismatch");
  Mat y(A.rows(), 1);
  Mat soft = Mat::Zero(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double m = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (mask01(i, j) != 0.0) m = std::max(m, A(i, j));
    require(std::isfinite(m), "logsumexp_rows: row with empty mask");
    double s = 0.0;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (mask01(i, j) != 0.0) s += std::exp(A(i, j) - m);
    y(i, 0) = m + std::log(s);
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (mask01(i, j) != 0.0) soft(i, j) = std::exp(A(i, j) - m) / s;
  }
  int out = push(std::move(y), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, soft, out](Tape& t) {
      const Mat& G = t.grad(out);
      t.grad_ref(a).array() += soft.array().colwise() * G.col(0).array();
    };
  }
  return out;
}

int Tape::diag(int a) {
  const Mat& A = value(a);
  require(A.rows() == A.cols(), "diag: input must be square");
  Mat y = A.diagonal();
  int out = push(std::move(y), rg(a), nullptr);
  if (rg(a)) {
    nodes_[static_cast<size_t>(out)].back = [a, out](Tape& t) {
      t.grad_ref(a).diagonal() += t.grad(out).col(0);
    };
  }
  return out;
}

int Tape::im2col(int x, int k, int stride, int pad_left, int pad_right) {
  const Mat& X = value(x);
  const int T = static_cast<int>(X.rows());
  const int C = static_cast<int>(X.cols());
  require(k >= 1 && stride >= 1 && pad_left >= 0 && pad_right >= 0,
          "im2col: bad geometry");
  const int padded = T + pad_left + pad_right;
  require(padded >= k, "im2col: window wider than padded input");
  const int rows = (padded - k) / stride + 1;
  Mat y = Mat::Zero(rows, static_cast<Eigen::Index>(k) * C);
  for (int r = 0; r < rows; ++r) {
    for (int kk = 0; kk < k; ++kk) {
      int src = r * stride + kk - pad_left;
      if (src < 0 || src >= T) continue;
      y.block(r, static_cast<Eigen::Index>(kk) * C, 1, C) = X.row(src);
    }
  }
  int out = push(std::move(y), rg(x), nullptr);
  if (rg(x)) {
    nodes_[static_cast<size_t>(out)].back =
        [x, k, stride, pad_left, T, C, rows, out](Tape& t) {
          const Mat& G = t.grad(out);
          Mat& gx = t.grad_ref(x);
          for (int r = 0; r < rows; ++r) {
            for (int kk = 0; kk < k; ++kk) {
              int src = r * stride + kk - pad_left;
              if (src < 0 || src >= T) continue;
              gx.row(src) += G.block(r, static_cast<Eigen::Index>(kk) * C, 1, C);
            }
          }
        };
  }
  return out;
}

int Tape::region_fuse(const Mat& box, const std::vector<int>& cls,
                      const Mat& score, int w, int b, int n_classes) {
  const Mat& W = value(w);
  const Mat& B = value(b);
  const int l = static_cast<int>(box.rows());
  require(box.cols() == 5, "region_fuse: box must be l x 5");
  require(static_cast<int>(cls.size()) == l && score.rows() == l &&
              score.cols() == 1,
          "region_fuse: class/score count mismatch");
  require(W.rows() == 5 + n_classes + 1 && B.rows() == 1 &&
              B.cols() == W.cols(),
          "region_fuse: weight shape mismatch");
  for (int c : cls)
    require(c >= 0 && c < n_classes, "region_fuse: class id out of range");
  Mat y = box * W.topRows(5);
  for (int i = 0; i < l; ++i) {
    y.row(i) += W.row(5 + cls[i]);
    y.row(i) += score(i, 0) * W.row(5 + n_classes);
    y.row(i) += B.row(0);
  }
  int out = push(std::move(y), rg(w) || rg(b), nullptr);
  if (rg(w) || rg(b)) {
    bool gw = rg(w), gb = rg(b);
    Mat boxc = box;
    Mat scorec = score;
    std::vector<int> clsc = cls;
    nodes_[static_cast<size_t>(out)].back =
        [w, b, gw, gb, boxc, scorec, clsc, n_classes, out](Tape& t) {
          const Mat& G = t.grad(out);
          if (gw) {
            Mat& gW = t.grad_ref(w);
            gW.topRows(5) += boxc.transpose() * G;
            for (size_t i = 0; i < clsc.size(); ++i)
              gW.row(5 + clsc[i]) += G.row(static_cast<Eigen::Index>(i));
            gW.row(5 + n_classes) += (scorec.transpose() * G).row(0);
          }
          if (gb) t.grad_ref(b) += G.colwise().sum();
        };
  }
  return out;
}

void Tape::backward(int root) {
  require(value(root).rows() == 1 && value(root).cols() == 1,
          "backward: root must be a scalar node");
  backward_seeded({{root, Mat::Ones(1, 1)}});
}

void Tape::backward_seeded(const std::vector<std::pair<int, Mat>>& seeds) {
  require(grad_enabled_, "backward on a value-only tape");
  require(!swept_, "tape already swept");
  for (const auto& [id, g] : seeds) {
    const Mat& v = value(id);
    require(g.rows() == v.rows() && g.cols() == v.cols(),
            "backward_seeded: seed shape mismatch");
    grad_ref(id) += g;
  }
  sweep();
}

void Tape::sweep() {
  swept_ = true;
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    Node& n = nodes_[static_cast<size_t>(i)];
    if (n.back && n.grad.size() != 0) n.back(*this);
  }
  for (const auto& [id, p] : param_nodes_) {
    if (!has_grad(id)) continue;
    if (p->grad.size() == 0)
      p->grad = nodes_[static_cast<size_t>(id)].grad;
    else
      p->grad += nodes_[static_cast<size_t>(id)].grad;
  }
}

}  // namespace nn
}  // namespace sas
