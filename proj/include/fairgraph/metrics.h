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


#ifndef FAIRGRAPH_METRICS_H_
#define FAIRGRAPH_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"

namespace fairgraph {

// Probabilities above this are predicted positive.
inline constexpr double kDecisionThreshold = 0.5;

std::vector<int> ThresholdPredictions(std::span<const double> probabilities);

// |P(yhat=1 | s=0) - P(yhat=1 | s=1)|. Errors when either group is empty.
absl::StatusOr<double> DeltaSp(std::span<const int> yhat,
                               std::span<const int> s);

// |TPR(s=0) - TPR(s=1)|. Errors when either group has no positives.
absl::StatusOr<double> DeltaEo(std::span<const int> yhat,
                               std::span<const int> y,
                               std::span<const int> s);

// Mann-Whitney AUROC with ties counted as one half. Errors unless both
// classes are present.
absl::StatusOr<double> Auroc(std::span<const double> scores,
                             std::span<const int> y);

// F1 of the positive class; 0 when precision + recall is 0.
double F1Score(std::span<const int> yhat, std::span<const int> y);
double Accuracy(std::span<const int> yhat, std::span<const int> y);

// Utility and fairness metrics of one run. Group metrics that are undefined
// on the evaluated nodes are empty optionals.
struct MetricsReport {
  uint64_t seed = 0;
  double acc = 0.0;
  double f1 = 0.0;
  std::optional<double> auroc;
  std::vector<std::optional<double>> delta_sp;  // One per sensitive column.
  std::vector<std::optional<double>> delta_eo;
  double sensitive_dcor = 0.0;  // dcor2(probabilities, S) on the nodes.
};

// Evaluates `probabilities` (one per node) on `nodes`.
absl::StatusOr<MetricsReport> ComputeMetrics(
    const Eigen::VectorXd& probabilities, const std::vector<int>& labels,
    const Eigen::MatrixXd& sensitive, std::span<const int> nodes,
    uint64_t seed);

// Mean and population standard deviation.
struct Summary {
  double mean = 0.0;
  double std = 0.0;
  int n = 0;
};
Summary Summarize(std::span<const double> values);

}  // namespace fairgraph

#endif  // FAIRGRAPH_METRICS_H_
