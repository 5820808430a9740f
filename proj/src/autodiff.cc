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

#include "fairgraph/autodiff.h"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace fairgraph::nn {
namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

const Eigen::MatrixXd& Var::value() const { return tape_->value(id_); }
const Eigen::MatrixXd& Var::grad() const { return tape_->grad(id_); }

Var Tape::Push(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::Constant(Eigen::MatrixXd value) {
  return Push({std::move(value), {}, false, nullptr});
}

Var Tape::Leaf(Eigen::MatrixXd value) {
  return Push({std::move(value), {}, true, nullptr});
}

Var Tape::Record(Eigen::MatrixXd value, std::initializer_list<Var> inputs,
                 BackwardFn backward) {
  bool requires_grad = false;
  for (const Var& v : inputs) {
    assert(v.tape_ == this);
    requires_grad = requires_grad || nodes_[v.id_].requires_grad;
  }
  return Push({std::move(value), {}, requires_grad,
               requires_grad ? std::move(backward) : nullptr});
}

void Tape::Accumulate(Var v, const Eigen::MatrixXd& g) {
  Node& node = nodes_[v.id_];
  if (!node.requires_grad) return;
  assert(g.rows() == node.value.rows() && g.cols() == node.value.cols());
  node.grad += g;
}

void Tape::Backward(Var root) {
  assert(root.tape_ == this);
  assert(nodes_[root.id_].value.size() == 1);
  for (Node& node : nodes_) {
    node.grad = Eigen::MatrixXd::Zero(node.value.rows(), node.value.cols());
  }
  if (!nodes_[root.id_].requires_grad) return;
  nodes_[root.id_].grad(0, 0) = 1.0;
  for (int id = root.id_; id >= 0; --id) {
    Node& node = nodes_[id];
    if (node.backward && node.requires_grad) node.backward(node.grad);
  }
}

Var MatMul(Var a, Var b) {
  assert(a.cols() == b.rows());
  Tape* t = a.tape();
  return t->Record(a.value() * b.value(), {a, b},
                   [t, a, b](const Eigen::MatrixXd& g) {
                     if (t->RequiresGrad(a)) {
                       t->Accumulate(a, g * b.value().transpose());
                     }
                     if (t->RequiresGrad(b)) {
                       t->Accumulate(b, a.value().transpose() * g);
                     }
                   });
}

Var Add(Var a, Var b) {
  Tape* t = a.tape();
  return t->Record(a.value() + b.value(), {a, b},
                   [t, a, b](const Eigen::MatrixXd& g) {
                     t->Accumulate(a, g);
                     t->Accumulate(b, g);
                   });
}

Var Sub(Var a, Var b) {
  Tape* t = a.tape();
  return t->Record(a.value() - b.value(), {a, b},
                   [t, a, b](const Eigen::MatrixXd& g) {
                     t->Accumulate(a, g);
                     t->Accumulate(b, -g);
                   });
}

Var AddBias(Var a, Var bias) {
  assert(bias.rows() == 1 && bias.cols() == a.cols());
  Tape* t = a.tape();
  Eigen::MatrixXd out = a.value();
  out.rowwise() += bias.value().row(0);
  return t->Record(std::move(out), {a, bias},
                   [t, a, bias](const Eigen::MatrixXd& g) {
                     t->Accumulate(a, g);
                     t->Accumulate(bias, g.colwise().sum());
                   });
}

Var Scale(Var a, double c) {
  Tape* t = a.tape();
  return t->Record(a.value() * c, {a},
                   [t, a, c](const Eigen::MatrixXd& g) {
                     t->Accumulate(a, g * c);
                   });
}

Var MulConstant(Var a, const Eigen::MatrixXd& c) {
  assert(a.rows() == c.rows() && a.cols() == c.cols());
  Tape* t = a.tape();
  return t->Record(a.value().cwiseProduct(c), {a},
                   [t, a, c](const Eigen::MatrixXd& g) {
                     t->Accumulate(a, g.cwiseProduct(c));
                   });
}

Var Relu(Var a) {
  Tape* t = a.tape();
  return t->Record(a.value().cwiseMax(0.0), {a},
                   [t, a](const Eigen::MatrixXd& g) {
                     t->Accumulate(a, (a.value().array() > 0.0)
                                          .select(g, 0.0));
                   });
}

Var Sigmoid(Var a) {
  Tape* t = a.tape();
  Eigen::MatrixXd out =
      a.value().unaryExpr([](double z) { return 1.0 / (1.0 + std::exp(-z)); });
  return t->Record(out, {a}, [t, a, out](const Eigen::MatrixXd& g) {
    t->Accumulate(a, g.cwiseProduct(out.cwiseProduct(
                         (1.0 - out.array()).matrix())));
  });
}

Var Sum(Var a) {
  Tape* t = a.tape();
  Eigen::MatrixXd out(1, 1);
  out(0, 0) = a.value().sum();
  return t->Record(std::move(out), {a}, [t, a](const Eigen::MatrixXd& g) {
    t->Accumulate(a, Eigen::MatrixXd::Constant(a.rows(), a.cols(), g(0, 0)));
  });
}

Var Mean(Var a) {
  return Scale(Sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Var FrobeniusNorm(Var a) {
  Tape* t = a.tape();
  const double norm = a.value().norm();
  Eigen::MatrixXd out(1, 1);
  out(0, 0) = norm;
  return t->Record(std::move(out), {a},
                   [t, a, norm](const Eigen::MatrixXd& g) {
                     if (norm > 0.0) t->Accumulate(a, a.value() * (g(0, 0) / norm));
                   });
}

Var SpMM(const SparseMatrix& m, Var a) {
  assert(m.cols() == a.rows());
  Tape* t = a.tape();
  Eigen::MatrixXd out = m * a.value();
  return t->Record(std::move(out), {a}, [t, a, &m](const Eigen::MatrixXd& g) {
    t->Accumulate(a, m.transpose() * g);
  });
}

Var GatherRows(Var a, std::span<const int> rows) {
  Tape* t = a.tape();
  std::vector<int> index(rows.begin(), rows.end());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(index.size()), a.cols());
  for (size_t r = 0; r < index.size(); ++r) out.row(r) = a.value().row(index[r]);
  return t->Record(std::move(out), {a},
                   [t, a, index = std::move(index)](const Eigen::MatrixXd& g) {
                     Eigen::MatrixXd full =
                         Eigen::MatrixXd::Zero(a.rows(), a.cols());
                     for (size_t r = 0; r < index.size(); ++r) {
                       full.row(index[r]) += g.row(r);
                     }
                     t->Accumulate(a, full);
                   });
}

Var ScaleColumns(const Eigen::MatrixXd& x, Var w) {
  assert(w.cols() == 1 && w.rows() == x.cols());
  Tape* t = w.tape();
  Eigen::MatrixXd out = x * w.value().col(0).asDiagonal();
  return t->Record(std::move(out), {w}, [t, w, x](const Eigen::MatrixXd& g) {
    t->Accumulate(w, x.cwiseProduct(g).colwise().sum().transpose());
  });
}

Var WeightedGcnPropagate(int num_nodes, std::span<const Edge> edges,
                         Var weights, Var h) {
  assert(weights.cols() == 1 &&
         weights.rows() == static_cast<Eigen::Index>(edges.size()));
  assert(h.rows() == num_nodes);
  Tape* t = h.tape();
  std::vector<Edge> edge_list(edges.begin(), edges.end());
  const Eigen::VectorXd w = weights.value().col(0);

  Eigen::VectorXd degree = Eigen::VectorXd::Ones(num_nodes);
  for (size_t e = 0; e < edge_list.size(); ++e) {
    degree(edge_list[e].u) += w(e);
    degree(edge_list[e].v) += w(e);
  }
  const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();

  const Eigen::MatrixXd& hv = h.value();
  Eigen::MatrixXd out = inv_sqrt.cwiseAbs2().asDiagonal() * hv;
  for (size_t e = 0; e < edge_list.size(); ++e) {
    const int u = edge_list[e].u, v = edge_list[e].v;
    const double c = w(e) * inv_sqrt(u) * inv_sqrt(v);
    out.row(u) += c * hv.row(v);
    out.row(v) += c * hv.row(u);
  }

  return t->Record(
      std::move(out), {weights, h},
      [t, weights, h, edge_list = std::move(edge_list), w, inv_sqrt,
       num_nodes](const Eigen::MatrixXd& g) {
        const Eigen::MatrixXd& hv = h.value();
        if (t->RequiresGrad(h)) {
          Eigen::MatrixXd gh = inv_sqrt.cwiseAbs2().asDiagonal() * g;
          for (size_t e = 0; e < edge_list.size(); ++e) {
            const int u = edge_list[e].u, v = edge_list[e].v;
            const double c = w(e) * inv_sqrt(u) * inv_sqrt(v);
            gh.row(v) += c * g.row(u);
            gh.row(u) += c * g.row(v);
          }
          t->Accumulate(h, gh);
        }
        if (!t->RequiresGrad(weights)) return;
        // Chain through c_e = w_e d_u d_v and d_i = deg_i^{-1/2}.
        Eigen::VectorXd d_inv_sqrt(num_nodes);
        for (int i = 0; i < num_nodes; ++i) {
          d_inv_sqrt(i) = 2.0 * inv_sqrt(i) * g.row(i).dot(hv.row(i));
        }
        Eigen::VectorXd d_coef(edge_list.size());
        for (size_t e = 0; e < edge_list.size(); ++e) {
          const int u = edge_list[e].u, v = edge_list[e].v;
          d_coef(e) = g.row(u).dot(hv.row(v)) + g.row(v).dot(hv.row(u));
          d_inv_sqrt(u) += d_coef(e) * w(e) * inv_sqrt(v);
          d_inv_sqrt(v) += d_coef(e) * w(e) * inv_sqrt(u);
        }
        Eigen::VectorXd d_degree(num_nodes);
        for (int i = 0; i < num_nodes; ++i) {
          const double s = inv_sqrt(i);
          d_degree(i) = -0.5 * s * s * s * d_inv_sqrt(i);
        }
        Eigen::MatrixXd gw(edge_list.size(), 1);
        for (size_t e = 0; e < edge_list.size(); ++e) {
          const int u = edge_list[e].u, v = edge_list[e].v;
          gw(e, 0) = d_coef(e) * inv_sqrt(u) * inv_sqrt(v) + d_degree(u) +
                     d_degree(v);
        }
        t->Accumulate(weights, gw);
      });
}

Var BinaryCrossEntropy(Var p, const Eigen::MatrixXd& targets) {
  assert(p.rows() == targets.rows() && p.cols() == targets.cols());
  Tape* t = p.tape();
  const double count = static_cast<double>(p.value().size());
  const Eigen::MatrixXd clamped =
      p.value().cwiseMax(kProbabilityClamp).cwiseMin(1.0 - kProbabilityClamp);
  Eigen::MatrixXd out(1, 1);
  out(0, 0) = -(targets.array() * clamped.array().log() +
                (1.0 - targets.array()) * (1.0 - clamped.array()).log())
                   .sum() /
              count;
  return t->Record(
      std::move(out), {p},
      [t, p, targets, clamped, count](const Eigen::MatrixXd& g) {
        const auto& raw = p.value().array();
        const auto inside =
            (raw >= kProbabilityClamp) && (raw <= 1.0 - kProbabilityClamp);
        Eigen::MatrixXd d =
            ((clamped.array() - targets.array()) /
             (clamped.array() * (1.0 - clamped.array())) / count)
                .matrix();
        t->Accumulate(p, inside.select(d.array() * g(0, 0), 0.0).matrix());
      });
}

namespace {

// Univariate x against a categorical sample in O(n log n + n C): after
// sorting x, per-category counts and sums below and above each point give
// both sum_l |x_k - x_l| B_kl and sum_l sign(x_k - x_l) B_kl.
void UnivariateCategoricalDcov(const Eigen::VectorXd& x,
                               const CenteredDistances& s, double& value,
                               Eigen::VectorXd& grad) {
  const int n = static_cast<int>(x.size());
  const int c = s.num_categories();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return x(a) < x(b); });
  std::vector<double> total_count(c, 0.0), total_sum(c, 0.0);
  for (int i = 0; i < n; ++i) {
    total_count[s.category(i)] += 1.0;
    total_sum[s.category(i)] += x(i);
  }
  std::vector<double> below_count(c, 0.0), below_sum(c, 0.0);
  std::vector<double> tie_count(c, 0.0), tie_sum(c, 0.0);
  double total = 0.0;
  grad.setZero(n);
  for (int start = 0; start < n;) {
    int end = start;
    while (end < n && x(order[end]) == x(order[start])) ++end;
    std::fill(tie_count.begin(), tie_count.end(), 0.0);
    std::fill(tie_sum.begin(), tie_sum.end(), 0.0);
    for (int r = start; r < end; ++r) {
      tie_count[s.category(order[r])] += 1.0;
      tie_sum[s.category(order[r])] += x(order[r]);
    }
    for (int r = start; r < end; ++r) {
      const int k = order[r];
      const int ck = s.category(k);
      const double xk = x(k);
      double abs_part = 0.0, sign_part = 0.0;
      for (int cat = 0; cat < c; ++cat) {
        const double above_count =
            total_count[cat] - below_count[cat] - tie_count[cat];
        const double above_sum = total_sum[cat] - below_sum[cat] - tie_sum[cat];
        const double b = s.TableEntry(ck, cat);
        abs_part += b * (xk * below_count[cat] - below_sum[cat] + above_sum -
                         xk * above_count);
        sign_part += b * (below_count[cat] - above_count);
      }
      total += abs_part;
      grad(k) = sign_part;
    }
    for (int cat = 0; cat < c; ++cat) {
      below_count[cat] += tie_count[cat];
      below_sum[cat] += tie_sum[cat];
    }
    start = end;
  }
  const double n2 = static_cast<double>(n) * n;
  value = total / n2;
  grad *= 2.0 / n2;
}

}  // namespace

Var DcovLoss(Var x, const CenteredDistances& sensitive) {
  assert(x.rows() == sensitive.n());
  Tape* t = x.tape();
  if (x.cols() == 1 && sensitive.categorical()) {
    double value = 0.0;
    Eigen::VectorXd grad;
    UnivariateCategoricalDcov(x.value().col(0), sensitive, value, grad);
    Eigen::MatrixXd out(1, 1);
    out(0, 0) = std::max(0.0, value);
    return t->Record(std::move(out), {x},
                     [t, x, grad = std::move(grad)](const Eigen::MatrixXd& g) {
                       t->Accumulate(x, grad * g(0, 0));
                     });
  }
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  const RowMajorMatrix xs = x.value();
  const double scale = 2.0 / (static_cast<double>(n) * n);

  // One pass yields both the value and the gradient.
  double total = 0.0;
  RowMajorMatrix grad = RowMajorMatrix::Zero(n, p);
  std::vector<double> diff(p);
  for (int k = 0; k < n; ++k) {
    const double* xk = xs.data() + static_cast<Eigen::Index>(k) * p;
    double* gk = grad.data() + static_cast<Eigen::Index>(k) * p;
    for (int l = k + 1; l < n; ++l) {
      const double* xl = xs.data() + static_cast<Eigen::Index>(l) * p;
      double sq = 0.0;
      for (int c = 0; c < p; ++c) {
        diff[c] = xk[c] - xl[c];
        sq += diff[c] * diff[c];
      }
      if (sq == 0.0) continue;
      const double a = std::sqrt(sq);
      const double b = sensitive.Entry(k, l);
      total += a * b;
      const double coef = b / a;
      double* gl = grad.data() + static_cast<Eigen::Index>(l) * p;
      for (int c = 0; c < p; ++c) {
        gk[c] += coef * diff[c];
        gl[c] -= coef * diff[c];
      }
    }
  }
  Eigen::MatrixXd out(1, 1);
  out(0, 0) = std::max(0.0, scale * total);
  Eigen::MatrixXd dx = grad * scale;
  return t->Record(std::move(out), {x},
                   [t, x, dx = std::move(dx)](const Eigen::MatrixXd& g) {
                     t->Accumulate(x, dx * g(0, 0));
                   });
}

Var Dropout(Var a, double rate, bool training, std::mt19937_64& rng) {
  if (!training || rate <= 0.0) return a;
  std::bernoulli_distribution keep(1.0 - rate);
  Eigen::MatrixXd mask(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < mask.cols(); ++j) {
    for (Eigen::Index i = 0; i < mask.rows(); ++i) {
      mask(i, j) = keep(rng) ? 1.0 / (1.0 - rate) : 0.0;
    }
  }
  return MulConstant(a, mask);
}

}  // namespace fairgraph::nn
