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


#ifndef FAIRGRAPH_ATTACK_H_
#define FAIRGRAPH_ATTACK_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "fairgraph/graph.h"
#include "fairgraph/layers.h"

namespace fairgraph {

inline const std::vector<double> kDefaultKnownFractions = {
    0.003125, 0.00625, 0.0125, 0.025, 0.05, 0.1, 0.2};

// Released data an attacker sees, plus the ground truth used for scoring.
struct AttackScenario {
  Eigen::MatrixXd features;
  std::vector<Edge> edges;
  std::vector<int> labels;
  Eigen::MatrixXd sensitive;        // Ground truth, n x k.
  std::vector<int> target_columns;  // Empty means every column.
  double known_fraction = 0.2;
  uint64_t seed = 0;
  int epochs = 1000;
  double lr = 1e-3;
  int hidden = 16;

  int num_nodes() const { return static_cast<int>(features.rows()); }
};

// Read access to the sensitive values of the known nodes only. Any lookup of
// another node is counted and answered with NaN.
class KnownSensitiveView {
 public:
  KnownSensitiveView(const Eigen::MatrixXd& sensitive,
                     const std::vector<int>& known,
                     const std::vector<int>& columns);

  const std::vector<int>& known() const { return known_; }
  int num_columns() const { return static_cast<int>(columns_.size()); }
  double at(int node, int target) const;
  int forbidden_accesses() const { return forbidden_accesses_; }

 private:
  std::vector<int> known_;
  std::vector<int> columns_;
  std::vector<int> row_of_;  // Node -> row of values_, or -1.
  Eigen::MatrixXd values_;
  mutable int forbidden_accesses_ = 0;
};

// Linear one-layer GCN (hidden units, no activation) and a sigmoid head
// with one output per target column, on features concatenated with one-hot
// labels.
struct Attacker {
  nn::ModelParams params;
  Eigen::MatrixXd probabilities;  // n x targets.
};

absl::StatusOr<Attacker> TrainAttacker(const AttackScenario& scenario,
                                       const KnownSensitiveView& view);

struct AttackResult {
  bool degenerate = false;  // No known set with both classes was found.
  int samples_drawn = 0;
  std::vector<int> known;
  std::vector<double> accuracy;     // Per target column, unknown nodes.
  std::vector<double> correlation;  // dcor2(probabilities, S), unknown nodes.
  std::vector<double> majority_accuracy;  // Constant majority-class floor.

  double MeanAccuracy() const;
  double MeanCorrelation() const;
  double MeanMajorityAccuracy() const;
};

// Draws a known set (resampling up to 10 times until every target column has
// both classes), trains on it, and scores the remaining nodes.
absl::StatusOr<AttackResult> RunAttack(const AttackScenario& scenario);

// A named (features, topology) pair for leakage sweeps.
struct AttackInput {
  std::string name;
  AttackScenario scenario;  // known_fraction and seed are overridden.
};

struct LeakageRow {
  std::string pair;
  double p = 0.0;
  std::string metric;  // accuracy, correlation or majority_accuracy.
  double mean = 0.0;
  double std = 0.0;  // Population std over non-degenerate seeds.
  int n = 0;
};

absl::StatusOr<std::vector<LeakageRow>> LeakageSweep(
    const std::vector<AttackInput>& inputs,
    const std::vector<double>& fractions, const std::vector<uint64_t>& seeds,
    int workers);

std::string LeakageCsv(const std::vector<LeakageRow>& rows);

}  // namespace fairgraph

#endif  // FAIRGRAPH_ATTACK_H_
