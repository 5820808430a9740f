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


#ifndef FAIRGRAPH_OPTIM_H_
#define FAIRGRAPH_OPTIM_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "fairgraph/autodiff.h"
#include "fairgraph/layers.h"

namespace fairgraph::nn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  // Decoupled: p <- p (1 - lr * weight_decay) before the moment step.
  double weight_decay = 0.0;
};

// Adam with bias correction. Moment buffers are created on the first Step()
// and then pinned to the parameter shapes.
class Adam {
 public:
  explicit Adam(AdamOptions options) : options_(options) {}

  // Updates `params` in place from `grads` (same order and shapes). A
  // non-finite gradient leaves every parameter untouched and returns an
  // error naming the offending parameter.
  absl::Status Step(std::span<NamedParam> params,
                    std::span<const Eigen::MatrixXd> grads);

  int step_count() const { return step_; }
  const AdamOptions& options() const { return options_; }

 private:
  AdamOptions options_;
  int step_ = 0;
  std::vector<Eigen::MatrixXd> m_;
  std::vector<Eigen::MatrixXd> v_;
};

// Soft-thresholding: sign(w_i) max(|w_i| - step * lambda1, 0).
Eigen::VectorXd ProximalL1Step(const Eigen::VectorXd& w, double step,
                               double lambda1);

struct GradCheckEntry {
  std::string name;
  double max_relative_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;

  double MaxError() const;
  bool Passes(double tolerance) const { return MaxError() <= tolerance; }
};

// Builds a scalar loss on a fresh tape from leaves bound to `params`.
using LossBuilder = std::function<Var(Tape&, std::span<const Var> params)>;

// Compares reverse-mode gradients with central differences (step `epsilon`)
// for every parameter entry. Relative error is
// |analytic - numeric| / max(|analytic|, |numeric|, 1e-6).
GradCheckReport GradCheck(const std::vector<NamedParam>& params,
                          const LossBuilder& loss, double epsilon = 1e-5);

}  // namespace fairgraph::nn

#endif  // FAIRGRAPH_OPTIM_H_
