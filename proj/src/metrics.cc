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


#include "fairgraph/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "fairgraph/dcov.h"
#include "fairgraph/status_macros.h"

namespace fairgraph {
namespace {

absl::Status CheckSameLength(size_t a, size_t b) {
  if (a != b) return absl::InvalidArgumentError("metric inputs differ in length");
  return absl::OkStatus();
}

}  // namespace

std::vector<int> ThresholdPredictions(std::span<const double> probabilities) {
  std::vector<int> out(probabilities.size());
  for (size_t i = 0; i < probabilities.size(); ++i) {
    out[i] = probabilities[i] > kDecisionThreshold ? 1 : 0;
  }
  return out;
}

absl::StatusOr<double> DeltaSp(std::span<const int> yhat,
                               std::span<const int> s) {
  FG_RETURN_IF_ERROR(CheckSameLength(yhat.size(), s.size()));
  double positives[2] = {0, 0}, counts[2] = {0, 0};
  for (size_t i = 0; i < yhat.size(); ++i) {
    counts[s[i]] += 1;
    positives[s[i]] += yhat[i];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    return absl::FailedPreconditionError("statistical parity: empty group");
  }
  return std::abs(positives[0] / counts[0] - positives[1] / counts[1]);
}

absl::StatusOr<double> DeltaEo(std::span<const int> yhat,
                               std::span<const int> y,
                               std::span<const int> s) {
  FG_RETURN_IF_ERROR(CheckSameLength(yhat.size(), y.size()));
  FG_RETURN_IF_ERROR(CheckSameLength(yhat.size(), s.size()));
  double hits[2] = {0, 0}, counts[2] = {0, 0};
  for (size_t i = 0; i < yhat.size(); ++i) {
    if (y[i] != 1) continue;
    counts[s[i]] += 1;
    hits[s[i]] += yhat[i];
  }
  if (counts[0] == 0 || counts[1] == 0) {
    return absl::FailedPreconditionError(
        "equal opportunity: a group has no positives");
  }
  return std::abs(hits[0] / counts[0] - hits[1] / counts[1]);
}

absl::StatusOr<double> Auroc(std::span<const double> scores,
                             std::span<const int> y) {
  FG_RETURN_IF_ERROR(CheckSameLength(scores.size(), y.size()));
  const size_t n = scores.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Sum of midranks of the positives.
  double rank_sum = 0.0;
  double num_pos = 0.0;
  for (size_t i = 0; i < n;) {
    size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (size_t k = i; k < j; ++k) {
      if (y[order[k]] == 1) {
        rank_sum += midrank;
        num_pos += 1;
      }
    }
    i = j;
  }
  const double num_neg = static_cast<double>(n) - num_pos;
  if (num_pos == 0 || num_neg == 0) {
    return absl::FailedPreconditionError("AUROC needs both classes");
  }
  return (rank_sum - num_pos * (num_pos + 1) / 2.0) / (num_pos * num_neg);
}

double F1Score(std::span<const int> yhat, std::span<const int> y) {
  double tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    tp += yhat[i] == 1 && y[i] == 1;
    fp += yhat[i] == 1 && y[i] == 0;
    fn += yhat[i] == 0 && y[i] == 1;
  }
  if (tp == 0) return 0.0;
  const double precision = tp / (tp + fp);
  const double recall = tp / (tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

double Accuracy(std::span<const int> yhat, std::span<const int> y) {
  if (y.empty()) return 0.0;
  double correct = 0;
  for (size_t i = 0; i < y.size(); ++i) correct += yhat[i] == y[i];
  return correct / static_cast<double>(y.size());
}

absl::StatusOr<MetricsReport> ComputeMetrics(
    const Eigen::VectorXd& probabilities, const std::vector<int>& labels,
    const Eigen::MatrixXd& sensitive, std::span<const int> nodes,
    uint64_t seed) {
  if (nodes.empty()) return absl::InvalidArgumentError("no nodes to evaluate");
  const int k = static_cast<int>(sensitive.cols());
  std::vector<double> p;
  std::vector<int> y;
  std::vector<std::vector<int>> s(k);
  Eigen::VectorXd p_vec(nodes.size());
  Eigen::MatrixXd s_sub(nodes.size(), k);
  for (size_t i = 0; i < nodes.size(); ++i) {
    const int v = nodes[i];
    if (v < 0 || v >= probabilities.size()) {
      return absl::OutOfRangeError("evaluation node out of range");
    }
    p.push_back(probabilities(v));
    p_vec(i) = probabilities(v);
    y.push_back(labels[v]);
    for (int c = 0; c < k; ++c) {
      s[c].push_back(sensitive(v, c) > 0.5 ? 1 : 0);
      s_sub(i, c) = sensitive(v, c);
    }
  }
  const std::vector<int> yhat = ThresholdPredictions(p);

  MetricsReport report;
  report.seed = seed;
  report.acc = Accuracy(yhat, y);
  report.f1 = F1Score(yhat, y);
  if (auto a = Auroc(p, y); a.ok()) report.auroc = *a;
  for (int c = 0; c < k; ++c) {
    auto sp = DeltaSp(yhat, s[c]);
    auto eo = DeltaEo(yhat, y, s[c]);
    report.delta_sp.push_back(sp.ok() ? std::optional<double>(*sp)
                                      : std::nullopt);
    report.delta_eo.push_back(eo.ok() ? std::optional<double>(*eo)
                                      : std::nullopt);
  }
  FG_ASSIGN_OR_RETURN(report.sensitive_dcor, Dcor2(p_vec, s_sub));
  return report;
}

Summary Summarize(std::span<const double> values) {
  Summary s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= s.n;
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(var / s.n);
  return s;
}

}  // namespace fairgraph
