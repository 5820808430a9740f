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


#ifndef FAIRGRAPH_CLASSIFIER_H_
#define FAIRGRAPH_CLASSIFIER_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "fairgraph/graph.h"
#include "fairgraph/layers.h"
#include "fairgraph/metrics.h"

namespace fairgraph {

struct ClassifierConfig {
  nn::Architecture arch = nn::Architecture::kGcn2;  // kGcn2, kSage or kGin.
  int hidden = 16;
  double dropout = 0.2;
  int epochs = 1000;
  double lr = 0.01;
  double weight_decay = 1e-5;

  absl::Status Validate() const;
};

// Command-line names: gcn, sage, gin.
absl::StatusOr<nn::Architecture> ParseClassifierArch(std::string_view name);
std::string_view ClassifierArchName(nn::Architecture arch);

struct TrainedClassifier {
  nn::ModelParams params;
  int best_epoch = 0;  // Number of updates applied to the kept checkpoint.
  double best_val_acc = 0.0;
  double final_val_acc = 0.0;  // Validation ACC after the last epoch.
};

// Parameter names and shapes of a two-layer model of `arch`.
std::vector<std::pair<std::string, std::pair<int, int>>> ExpectedShapes(
    nn::Architecture arch, int in_dim, int hidden);

// Graph layer -> ReLU -> dropout -> linear head -> sigmoid, trained on the
// BCE of the training nodes with Adam. Returns the checkpoint with the best
// validation accuracy (the untrained model counts as epoch 0).
absl::StatusOr<TrainedClassifier> TrainClassifier(const AttributedGraph& graph,
                                                  const DataSplit& split,
                                                  const ClassifierConfig& cfg,
                                                  uint64_t seed);

// Positive-class probabilities for every node, inference mode.
absl::StatusOr<Eigen::VectorXd> PredictProbabilities(
    const nn::ModelParams& params, const AttributedGraph& graph);

// Metrics on the test nodes.
absl::StatusOr<MetricsReport> EvaluateClassifier(const TrainedClassifier& clf,
                                                 const AttributedGraph& graph,
                                                 const DataSplit& split,
                                                 uint64_t seed);

// Versioned JSON blob of the parameters.
std::string ClassifierToJson(const nn::ModelParams& params);
absl::StatusOr<nn::ModelParams> ClassifierFromJson(std::string_view json);

}  // namespace fairgraph

#endif  // FAIRGRAPH_CLASSIFIER_H_
