// Copyright 2026 The fairgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRGRAPH_AUTODIFF_H_
#define FAIRGRAPH_AUTODIFF_H_

#include <deque>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fairgraph/dcov.h"
#include "fairgraph/graph.h"

namespace fairgraph::nn {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid as long as the
// tape is alive.
class Var {
 public:
  Var() = default;

  const Eigen::MatrixXd& value() const;
  // Gradient of the last Backward() root with respect to this value. Zero
  // for nodes that do not require gradients.
  const Eigen::MatrixXd& grad() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  double scalar() const { return value()(0, 0); }
  Tape* tape() const { return tape_; }
  int id() const { return id_; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Records a computation for reverse-mode differentiation. Build a fresh tape
// per forward pass.
class Tape {
 public:
  using BackwardFn = std::function<void(const Eigen::MatrixXd& grad_out)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Eigen::MatrixXd value);
  Var Leaf(Eigen::MatrixXd value);

  // Records an op output. `backward` is invoked with the output gradient and
  // should call Accumulate() on its inputs. It is skipped when no input
  // requires a gradient.
  Var Record(Eigen::MatrixXd value, std::initializer_list<Var> inputs,
             BackwardFn backward);

  bool RequiresGrad(Var v) const { return nodes_[v.id_].requires_grad; }
  // Adds `g` into the gradient of `v`; a no-op for constants.
  void Accumulate(Var v, const Eigen::MatrixXd& g);

  // Zeroes every gradient, seeds d(root)/d(root) = 1 and runs the recorded
  // backward functions in reverse order. `root` must be 1 x 1.
  void Backward(Var root);

  const Eigen::MatrixXd& value(int id) const { return nodes_[id].value; }
  const Eigen::MatrixXd& grad(int id) const { return nodes_[id].grad; }
  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Eigen::MatrixXd value;
    Eigen::MatrixXd grad;
    bool requires_grad = false;
    BackwardFn backward;
  };

  Var Push(Node node);

  std::deque<Node> nodes_;
};

// Elementwise and linear-algebra ops. Shapes are checked with assertions;
// the layer functions in layers.h validate user-facing shapes.
Var MatMul(Var a, Var b);
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
// a (n x p) + bias (1 x p) broadcast over rows.
Var AddBias(Var a, Var bias);
Var Scale(Var a, double c);
Var MulConstant(Var a, const Eigen::MatrixXd& c);
Var Relu(Var a);
Var Sigmoid(Var a);
Var Sum(Var a);
Var Mean(Var a);
// Frobenius norm; the subgradient at zero is taken as zero.
Var FrobeniusNorm(Var a);
// Constant sparse operator times a: m * a.
// `m` is captured by reference and must outlive the tape's Backward().
Var SpMM(const SparseMatrix& m, Var a);
Var GatherRows(Var a, std::span<const int> rows);
// x * diag(w) for a constant x (n x d) and w (d x 1).
Var ScaleColumns(const Eigen::MatrixXd& x, Var w);

// D^{-1/2} (A_w + I) D^{-1/2} h with differentiable edge weights w (m x 1,
// one per undirected edge, self-loops fixed at 1).
Var WeightedGcnPropagate(int num_nodes, std::span<const Edge> edges,
                         Var weights, Var h);

// Mean binary cross-entropy of probabilities p against 0/1 targets, with p
// clamped to [1e-7, 1 - 1e-7]. Clamped entries contribute no gradient.
inline constexpr double kProbabilityClamp = 1e-7;
Var BinaryCrossEntropy(Var p, const Eigen::MatrixXd& targets);

// V^2_n(x, S) against a fixed sample S. The gradient uses
//   dV/dx_k = (2/n^2) sum_l B_kl (x_k - x_l) / |x_k - x_l|
// with zero contribution from coincident rows.
Var DcovLoss(Var x, const CenteredDistances& sensitive);

// Inverted dropout. Identity when `training` is false or rate is 0.
Var Dropout(Var a, double rate, bool training, std::mt19937_64& rng);

}  // namespace fairgraph::nn

#endif  // FAIRGRAPH_AUTODIFF_H_
