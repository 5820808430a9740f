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


#include "fairgraph/optim.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"

namespace fairgraph::nn {

absl::Status Adam::Step(std::span<NamedParam> params,
                        std::span<const Eigen::MatrixXd> grads) {
  if (params.size() != grads.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "adam: %d parameters but %d gradients", params.size(), grads.size()));
  }
  if (m_.empty() && step_ == 0) {
    for (const NamedParam& p : params) {
      m_.push_back(Eigen::MatrixXd::Zero(p.value.rows(), p.value.cols()));
      v_.push_back(Eigen::MatrixXd::Zero(p.value.rows(), p.value.cols()));
    }
  }
  if (m_.size() != params.size()) {
    return absl::InvalidArgumentError("adam: parameter count changed");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    const Eigen::MatrixXd& g = grads[i];
    if (g.rows() != params[i].value.rows() ||
        g.cols() != params[i].value.cols() || g.rows() != m_[i].rows() ||
        g.cols() != m_[i].cols()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "adam: gradient shape mismatch for '%s'", params[i].name));
    }
    if (!g.allFinite()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "adam: non-finite gradient for '%s'", params[i].name));
    }
  }

  ++step_;
  const AdamOptions& o = options_;
  const double correction1 = 1.0 - std::pow(o.beta1, step_);
  const double correction2 = 1.0 - std::pow(o.beta2, step_);
  for (size_t i = 0; i < params.size(); ++i) {
    Eigen::MatrixXd& p = params[i].value;
    const Eigen::MatrixXd& g = grads[i];
    if (o.weight_decay != 0.0) p *= 1.0 - o.lr * o.weight_decay;
    m_[i] = o.beta1 * m_[i] + (1.0 - o.beta1) * g;
    v_[i] = o.beta2 * v_[i] + (1.0 - o.beta2) * g.cwiseAbs2();
    p.array() -= o.lr * (m_[i].array() / correction1) /
                 ((v_[i].array() / correction2).sqrt() + o.eps);
  }
  return absl::OkStatus();
}

Eigen::VectorXd ProximalL1Step(const Eigen::VectorXd& w, double step,
                               double lambda1) {
  const double threshold = step * lambda1;
  if (threshold <= 0.0) return w;
  return w.unaryExpr([threshold](double x) {
    const double shrunk = std::max(std::abs(x) - threshold, 0.0);
    return x < 0.0 ? -shrunk : shrunk;
  });
}

double GradCheckReport::MaxError() const {
  double worst = 0.0;
  for (const GradCheckEntry& e : entries) {
    worst = std::max(worst, e.max_relative_error);
  }
  return worst;
}

GradCheckReport GradCheck(const std::vector<NamedParam>& params,
                          const LossBuilder& loss, double epsilon) {
  GradCheckReport report;
  if (params.empty()) return report;

  auto evaluate = [&](const std::vector<NamedParam>& values) {
    Tape tape;
    std::vector<Var> leaves;
    for (const NamedParam& p : values) leaves.push_back(tape.Leaf(p.value));
    return loss(tape, leaves).scalar();
  };

  std::vector<Eigen::MatrixXd> analytic;
  {
    Tape tape;
    std::vector<Var> leaves;
    for (const NamedParam& p : params) leaves.push_back(tape.Leaf(p.value));
    Var root = loss(tape, leaves);
    tape.Backward(root);
    for (const Var& v : leaves) analytic.push_back(v.grad());
  }

  std::vector<NamedParam> probe = params;
  for (size_t i = 0; i < params.size(); ++i) {
    GradCheckEntry entry{params[i].name, 0.0};
    Eigen::MatrixXd& value = probe[i].value;
    for (Eigen::Index k = 0; k < value.size(); ++k) {
      const double original = value.data()[k];
      value.data()[k] = original + epsilon;
      const double plus = evaluate(probe);
      value.data()[k] = original - epsilon;
      const double minus = evaluate(probe);
      value.data()[k] = original;
      const double numeric = (plus - minus) / (2.0 * epsilon);
      const double a = analytic[i].data()[k];
      const double denom =
          std::max({std::abs(a), std::abs(numeric), 1e-6});
      entry.max_relative_error =
          std::max(entry.max_relative_error, std::abs(a - numeric) / denom);
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace fairgraph::nn
