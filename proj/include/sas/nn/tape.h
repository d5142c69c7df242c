// include/sas/nn/tape.h

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

#ifndef SAS_NN_TAPE_H_
#define SAS_NN_TAPE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sas/common.h"

namespace sas {
namespace nn {

// A named trainable tensor.  Lives outside any tape; the optimizer keys its
// moment buffers by name, so names must be unique within a model.
struct Param {
  std::string name;
  Mat value;
  Mat grad;

  void zero_grad() { grad = Mat::Zero(value.rows(), value.cols()); }
};

// Reverse-mode tape over double matrices.  Node handles are plain ints;
// creation order is a valid topological order, so the backward sweep walks
// the node list in reverse.  A tape built with grad_enabled=false records
// values only and cannot be differentiated.
class Tape {
 public:
  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  int constant(Mat v);
  // Registers (or re-uses) a leaf for p.  The same Param used several times
  // on one tape maps to a single node, so gradients of repeated uses
  // accumulate before being flushed to p.grad.
  int param(Param& p);

  const Mat& value(int id) const { return nodes_[static_cast<size_t>(id)].value; }
  const Mat& grad(int id) const;
  bool grad_enabled() const { return grad_enabled_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  int matmul(int a, int b);
  int transpose(int a);
  int add(int a, int b);
  int sub(int a, int b);
  int mul(int a, int b);
  int scale(int a, double s);
  int add_rowvec(int a, int b);          // b is 1 x N, broadcast over rows
  int mul_const(int a, const Mat& m);    // elementwise, m not differentiated
  int hcat(const std::vector<int>& parts);
  int vcat(const std::vector<int>& parts);
  int slice_cols(int a, int start, int n);
  int slice_rows(int a, int start, int n);
  int row(int a, int i) { return slice_rows(a, i, 1); }
  int reverse_rows(int a);
  int relu(int a);
  int tanh_(int a);
  int sigmoid(int a);
  int exp_(int a);
  int log_(int a);
  int softplus(int a);
  int square(int a);
  int sum(int a);                        // 1 x 1
  int mean_rows(int a);                  // 1 x N
  int softmax_rows(int a);
  // Row-wise log-sum-exp restricted to entries where mask01 is nonzero.
  // Every row of mask01 must select at least one entry.  Returns T x 1.
  int logsumexp_rows(int a, const Mat& mask01);
  int diag(int a);                       // square input, returns B x 1
  // Unfolds x (T x Cin) into sliding windows of width k so that a matmul
  // against (k*Cin) x Cout weights realizes a 1-d convolution.  Rows cover
  // positions of the padded sequence at the given stride.
  int im2col(int x, int k, int stride, int pad_left, int pad_right);
  // Fully connected layer over the sparse detector descriptor
  // [box(5) ; one_hot(class, n_classes) ; score(1)] without materializing
  // the one-hot block.  W is (5 + n_classes + 1) x out, b is 1 x out.
  int region_fuse(const Mat& box, const std::vector<int>& cls, const Mat& score,
                  int w, int b, int n_classes);

  // Seeds root (which must be 1 x 1) with 1 and sweeps.
  void backward(int root);
  // Seeds several nodes with explicit cotangents, then sweeps once.  Used to
  // fold batch-level loss terms back into per-item graphs.
  void backward_seeded(const std::vector<std::pair<int, Mat>>& seeds);

 private:
  struct Node {
    Mat value;
    Mat grad;  // 0 x 0 until first contribution
    bool requires_grad = false;
    std::function<void(Tape&)> back;
  };

  int push(Mat value, bool requires_grad, std::function<void(Tape&)> back);
  bool rg(int a) const { return nodes_[static_cast<size_t>(a)].requires_grad; }
  Mat& grad_ref(int id);
  bool has_grad(int id) const;
  void sweep();

  bool grad_enabled_;
  bool swept_ = false;
  std::vector<Node> nodes_;
  std::vector<std::pair<int, Param*>> param_nodes_;
  std::unordered_map<const Param*, int> param_ids_;
};

}  // namespace nn
}  // namespace sas

#endif  // SAS_NN_TAPE_H_
