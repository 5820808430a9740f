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


#include "fairgraph/topology_debias.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "fairgraph/csv.h"
#include "fairgraph/optim.h"
#include "fairgraph/status_macros.h"

namespace fairgraph {
namespace {

Eigen::MatrixXd Targets(const std::vector<int>& labels,
                        const std::vector<int>& nodes) {
  Eigen::MatrixXd t(nodes.size(), 1);
  for (size_t i = 0; i < nodes.size(); ++i) t(i, 0) = labels[nodes[i]];
  return t;
}

}  // namespace

EdgeWeightSet EdgeWeightSet::Uniform(std::vector<Edge> edges,
                                     double raw_value) {
  EdgeWeightSet set;
  set.raw = Eigen::VectorXd::Constant(edges.size(), raw_value);
  set.edges = std::move(edges);
  return set;
}

Eigen::VectorXd EdgeWeightSet::Squashed() const {
  return raw.unaryExpr([](double r) { return 1.0 / (1.0 + std::exp(-r)); });
}

absl::StatusOr<FairMpProblem> FairMpProblem::Create(
    const AttributedGraph& graph, Eigen::MatrixXd features,
    std::vector<int> train, std::vector<int> val) {
  if (features.rows() != graph.num_nodes() || features.cols() < 1) {
    return absl::InvalidArgumentError(
        "fair message passing needs one feature row per node");
  }
  if (!features.allFinite()) {
    return absl::InvalidArgumentError("features are not finite");
  }
  int positives = 0;
  for (int v : train) {
    if (v < 0 || v >= graph.num_nodes()) {
      return absl::OutOfRangeError("train node out of range");
    }
    positives += graph.labels()[v];
  }
  if (positives == 0 || positives == static_cast<int>(train.size())) {
    return absl::FailedPreconditionError(
        "training nodes contain a single label class");
  }
  FairMpProblem p;
  p.num_nodes_ = graph.num_nodes();
  p.edges_ = graph.edges();
  p.features_ = std::move(features);
  p.train_targets_ = Targets(graph.labels(), train);
  p.val_targets_ = Targets(graph.labels(), val);
  p.train_ = std::move(train);
  p.val_ = std::move(val);
  p.sensitive_ = std::make_shared<const CenteredDistances>(graph.sensitive());
  return p;
}

FairMpProblem::Output FairMpProblem::Objective(nn::Var raw, nn::Var w,
                                               nn::Var b,
                                               double lambda4) const {
  nn::Tape& tape = *raw.tape();
  nn::Var projected = nn::MatMul(tape.Constant(features_), w);
  nn::Var propagated = nn::WeightedGcnPropagate(num_nodes_, edges_,
                                                nn::Sigmoid(raw), projected);
  nn::Var probabilities = nn::Sigmoid(nn::AddBias(propagated, b));
  nn::Var classification = nn::BinaryCrossEntropy(
      nn::GatherRows(probabilities, train_), train_targets_);
  nn::Var fairness = nn::DcovLoss(probabilities, *sensitive_);
  Output out{nn::Add(classification, nn::Scale(fairness, lambda4)),
             probabilities, classification};
  if (!val_.empty()) {
    out.validation_loss = nn::BinaryCrossEntropy(
        nn::GatherRows(probabilities, val_), val_targets_);
  }
  return out;
}

absl::StatusOr<FairMpResult> FairMpTrain(const FairMpProblem& problem,
                                         const FairMpOptions& options,
                                         uint64_t seed) {
  if (options.epochs < 0 || !(options.lr > 0.0) || options.lambda4 < 0.0 ||
      options.weight_decay < 0.0 || options.patience < 0) {
    return absl::InvalidArgumentError("invalid fair message-passing options");
  }
  FairMpResult result;
  result.weights =
      EdgeWeightSet::Uniform(problem.edges(), options.initial_raw_weight);
  std::mt19937_64 rng(seed);
  result.classifier = nn::ModelParams(nn::Architecture::kGcn1);
  result.classifier.Add("gcn.w", nn::UniformInit(problem.num_features(), 1, rng));
  result.classifier.Add("gcn.b", Eigen::MatrixXd::Zero(1, 1));

  // Edge weights and classifier parameters share one optimizer.
  std::vector<nn::NamedParam> params;
  params.push_back({"edge.raw", result.weights.raw});
  for (const nn::NamedParam& p : result.classifier.params()) params.push_back(p);
  nn::Adam adam({.lr = options.lr, .weight_decay = options.weight_decay});

  double best_val = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    nn::Tape tape;
    nn::Var raw = tape.Leaf(params[0].value);
    nn::Var w = tape.Leaf(params[1].value);
    nn::Var b = tape.Leaf(params[2].value);
    FairMpProblem::Output out = problem.Objective(raw, w, b, options.lambda4);
    const double loss = out.total.scalar();
    if (!std::isfinite(loss)) {
      return absl::InternalError(absl::StrFormat(
          "fair message-passing loss is not finite at epoch %d", epoch));
    }
    result.loss_trajectory.push_back(loss);
    if (options.patience > 0) {
      const double val = out.validation_loss.scalar();
      if (val < best_val) {
        best_val = val;
        since_best = 0;
      } else if (++since_best >= options.patience) {
        break;
      }
    }
    tape.Backward(out.total);
    std::vector<Eigen::MatrixXd> grads = {raw.grad(), w.grad(), b.grad()};
    FG_RETURN_IF_ERROR(adam.Step(params, grads));
    result.epochs_run = epoch + 1;
  }
  result.weights.raw = params[0].value.col(0);
  result.classifier.params()[0].value = params[1].value;
  result.classifier.params()[1].value = params[2].value;
  return result;
}

absl::StatusOr<PrunedTopology> PostPrune(const EdgeWeightSet& weights,
                                         double r_p) {
  if (!(r_p >= 0.0 && r_p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("pruning threshold must lie in [0, 1], got %g", r_p));
  }
  if (weights.raw.size() != static_cast<Eigen::Index>(weights.edges.size())) {
    return absl::InvalidArgumentError("edge weights do not cover every edge");
  }
  const Eigen::VectorXd squashed = weights.Squashed();
  PrunedTopology out;
  out.r_p = r_p;
  for (size_t e = 0; e < weights.edges.size(); ++e) {
    (squashed(e) >= r_p ? out.kept : out.removed).push_back(weights.edges[e]);
  }
  return out;
}

std::string PrunedTopologyCsv(const AttributedGraph& graph,
                              const EdgeWeightSet& weights,
                              const PrunedTopology& pruned) {
  const Eigen::VectorXd squashed = weights.Squashed();
  std::string out = "src,dst,weight,kept\n";
  for (size_t e = 0; e < weights.edges.size(); ++e) {
    const Edge& edge = weights.edges[e];
    const bool kept = squashed(e) >= pruned.r_p;
    absl::StrAppend(&out, graph.node_ids()[edge.u], ",",
                    graph.node_ids()[edge.v], ",", FormatShortest(squashed(e)),
                    ",", kept ? 1 : 0, "\n");
  }
  return out;
}

std::string_view AblationName(Ablation a) {
  switch (a) {
    case Ablation::kNone:
      return "none";
    case Ablation::kWithoutMask:
      return "w/o-msk";
    case Ablation::kWithoutReconstruct:
      return "w/o-re";
    case Ablation::kWithoutFeature:
      return "w/o-fe";
    case Ablation::kWithoutTopology:
      return "w/o-to";
  }
  return "unknown";
}

absl::StatusOr<Ablation> ParseAblation(std::string_view name) {
  for (Ablation a : {Ablation::kNone, Ablation::kWithoutMask,
                     Ablation::kWithoutReconstruct, Ablation::kWithoutFeature,
                     Ablation::kWithoutTopology}) {
    if (AblationName(a) == name) return a;
  }
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown ablation '", std::string(name),
      "' (expected w/o-msk, w/o-re, w/o-fe or w/o-to)"));
}

PipelineWiring WiringFor(Ablation a) {
  PipelineWiring w;
  switch (a) {
    case Ablation::kNone:
      break;
    case Ablation::kWithoutMask:
      w.premask = false;
      break;
    case Ablation::kWithoutReconstruct:
      w.reconstruct = false;
      break;
    case Ablation::kWithoutFeature:
      w.premask = false;
      w.reconstruct = false;
      break;
    case Ablation::kWithoutTopology:
      w.topology = false;
      break;
  }
  return w;
}

}  // namespace fairgraph
