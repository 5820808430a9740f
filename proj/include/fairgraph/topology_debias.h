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


#ifndef FAIRGRAPH_TOPOLOGY_DEBIAS_H_
#define FAIRGRAPH_TOPOLOGY_DEBIAS_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairgraph/autodiff.h"
#include "fairgraph/dcov.h"
#include "fairgraph/graph.h"
#include "fairgraph/layers.h"

namespace fairgraph {

// One learnable raw weight per undirected edge, so weight(i, j) and
// weight(j, i) are the same parameter. Message passing and pruning use the
// squashed value sigmoid(raw).
struct EdgeWeightSet {
  std::vector<Edge> edges;
  Eigen::VectorXd raw;

  static EdgeWeightSet Uniform(std::vector<Edge> edges, double raw_value);
  Eigen::VectorXd Squashed() const;
};

struct FairMpOptions {
  double lambda4 = 1.29e4;
  int epochs = 1000;
  double lr = 1e-3;
  double weight_decay = 1e-5;
  // Stop after this many epochs without a better validation loss; 0 is off.
  int patience = 0;
  double initial_raw_weight = 1.0;
};

struct FairMpResult {
  EdgeWeightSet weights;
  nn::ModelParams classifier;  // gcn1: "gcn.w" (d x 1), "gcn.b" (1 x 1).
  std::vector<double> loss_trajectory;
  int epochs_run = 0;
};

// Inputs of the fair message-passing objective
//   BCE(train nodes) + lambda4 * V^2(sigmoid(logits) over all nodes, S)
// where logits = A_w X W + b and A_w is the weighted normalized adjacency.
class FairMpProblem {
 public:
  static absl::StatusOr<FairMpProblem> Create(const AttributedGraph& graph,
                                              Eigen::MatrixXd features,
                                              std::vector<int> train,
                                              std::vector<int> val);

  // Builds the objective on `raw`'s tape; returns {total, probabilities}.
  struct Output {
    nn::Var total;
    nn::Var probabilities;
    nn::Var validation_loss;  // BCE on validation nodes (no fairness term).
  };
  Output Objective(nn::Var raw, nn::Var w, nn::Var b, double lambda4) const;

  int num_nodes() const { return num_nodes_; }
  int num_features() const { return static_cast<int>(features_.cols()); }
  const std::vector<Edge>& edges() const { return edges_; }

 private:
  FairMpProblem() = default;

  int num_nodes_ = 0;
  std::vector<Edge> edges_;
  Eigen::MatrixXd features_;
  std::vector<int> train_;
  std::vector<int> val_;
  Eigen::MatrixXd train_targets_;
  Eigen::MatrixXd val_targets_;
  std::shared_ptr<const CenteredDistances> sensitive_;
};

// Jointly trains raw edge weights and a one-layer GCN with Adam.
absl::StatusOr<FairMpResult> FairMpTrain(const FairMpProblem& problem,
                                         const FairMpOptions& options,
                                         uint64_t seed);

struct PrunedTopology {
  std::vector<Edge> kept;
  std::vector<Edge> removed;
  double r_p = 0.0;
};

// Keeps an edge iff its squashed weight is >= r_p.
absl::StatusOr<PrunedTopology> PostPrune(const EdgeWeightSet& weights,
                                         double r_p);

// CSV with header `src,dst,weight,kept`, using the graph's original ids.
std::string PrunedTopologyCsv(const AttributedGraph& graph,
                              const EdgeWeightSet& weights,
                              const PrunedTopology& pruned);

enum class Ablation {
  kNone,
  kWithoutMask,         // "w/o-msk": reconstruct the full feature matrix.
  kWithoutReconstruct,  // "w/o-re": use the masked features as they are.
  kWithoutFeature,      // "w/o-fe": skip pre-masking and reconstruction.
  kWithoutTopology,     // "w/o-to": skip fair message passing and pruning.
};

std::string_view AblationName(Ablation a);
absl::StatusOr<Ablation> ParseAblation(std::string_view name);

// Which pipeline stages an ablation runs.
struct PipelineWiring {
  bool premask = true;
  bool reconstruct = true;
  bool topology = true;
};

PipelineWiring WiringFor(Ablation a);

}  // namespace fairgraph

#endif  // FAIRGRAPH_TOPOLOGY_DEBIAS_H_
