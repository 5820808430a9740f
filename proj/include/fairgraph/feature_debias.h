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


#ifndef FAIRGRAPH_FEATURE_DEBIAS_H_
#define FAIRGRAPH_FEATURE_DEBIAS_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairgraph/dcov.h"
#include "fairgraph/graph.h"
#include "fairgraph/layers.h"
#include "fairgraph/optim.h"

namespace fairgraph {

// dcor2 of every feature column against the sensitive matrix (all columns
// jointly) and against the labels.
struct PremaskScores {
  Eigen::VectorXd sensitive;
  Eigen::VectorXd label;
};

absl::StatusOr<PremaskScores> ComputePremaskScores(const AttributedGraph& g);

// Which features pre-masking removes and why. Index sets are ascending.
struct MaskReport {
  std::vector<int> set_top;  // x most sensitive-correlated features.
  std::vector<int> set_les;  // x least label-correlated features.
  std::vector<int> set_int;  // set_top intersect set_les.
  std::vector<int> set_sen;  // Features with sensitive score >= r_s.
  std::vector<int> set_uni;  // set_int union set_sen: the masked features.
  PremaskScores scores;
  double r = 0.0;
  double r_s = 0.0;
  int x = 0;  // floor(r * d).

  std::string ToJson(const std::vector<std::string>& feature_names) const;
};

// Ranking ties go to the lower feature index. Requires 0 < r < 1 and
// 0 < r_s < 1.
absl::StatusOr<MaskReport> PremaskSelect(const PremaskScores& scores,
                                         double r, double r_s);

struct MaskedFeatures {
  Eigen::MatrixXd features;
  std::vector<std::string> names;
  std::vector<int> kept_columns;  // Original indices, ascending.
};

// Drops the columns in report.set_uni. Masking every column is an error.
absl::StatusOr<MaskedFeatures> ApplyMask(
    const Eigen::MatrixXd& features, const std::vector<std::string>& names,
    const MaskReport& report);

struct ReconstructOptions {
  double lambda1 = 1e-3;  // L1 sparsity of the feature weights.
  double lambda2 = 3.5e4;  // dCov fairness penalty.
  double lambda3 = 0.02;   // Adversary term.
  int epochs = 500;
  double lr = 1e-3;
  double weight_decay = 1e-5;
};

struct EpochLoss {
  double reconstruction = 0.0;  // ||X_masked - X_hat||_F.
  double sparsity = 0.0;        // ||w||_1.
  double fairness = 0.0;        // V^2(X_hat, S).
  double adversary = 0.0;       // Adversary BCE on S.
  double total = 0.0;  // reconstruction + l1 sparsity + l2 fairness - l3 adv.
};

struct FeatureDebiasResult {
  Eigen::MatrixXd masked;    // Input features.
  Eigen::MatrixXd debiased;  // masked * diag(weights).
  Eigen::VectorXd weights;
  nn::ModelParams adversary;
  std::vector<EpochLoss> trajectory;
};

// Adversarial reweighting of the masked features. Each epoch runs one
// adversary step (the adversary descends on its own BCE with the weights
// frozen) and one main step (the weights descend on the combined objective
// with the adversary frozen, then get soft-thresholded).
class FeatureReconstructor {
 public:
  static absl::StatusOr<FeatureReconstructor> Create(
      Eigen::MatrixXd masked, Eigen::MatrixXd sensitive,
      const ReconstructOptions& options, uint64_t seed);

  absl::Status AdversaryStep();
  // Returns the pre-step losses of the main objective.
  absl::StatusOr<EpochLoss> MainStep();

  Eigen::VectorXd weights() const { return weights_[0].value.col(0); }
  const nn::ModelParams& adversary() const { return adversary_; }
  Eigen::MatrixXd Debiased() const;

  // Runs options.epochs epochs and returns the final state.
  absl::StatusOr<FeatureDebiasResult> Run() &&;

 private:
  FeatureReconstructor(Eigen::MatrixXd masked, Eigen::MatrixXd sensitive,
                       const ReconstructOptions& options, uint64_t seed);

  Eigen::MatrixXd masked_;
  Eigen::MatrixXd sensitive_;
  std::unique_ptr<CenteredDistances> sensitive_distances_;
  ReconstructOptions options_;
  std::vector<nn::NamedParam> weights_;  // One d_m x 1 entry.
  nn::ModelParams adversary_;
  nn::Adam weight_optimizer_;
  nn::Adam adversary_optimizer_;
  int epoch_ = 0;
  std::vector<EpochLoss> trajectory_;
};

}  // namespace fairgraph

#endif  // FAIRGRAPH_FEATURE_DEBIAS_H_
