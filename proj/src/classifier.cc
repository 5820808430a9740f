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


#include "fairgraph/classifier.h"

#include <random>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "fairgraph/autodiff.h"
#include "fairgraph/optim.h"
#include "fairgraph/random.h"
#include "fairgraph/status_macros.h"
#include "json.hpp"

namespace fairgraph {
namespace {

constexpr int kFormatVersion = 1;

enum Stream : uint64_t { kInitStream = 1, kDropoutStream = 2 };

// The aggregation operator of the model's graph layer.
absl::StatusOr<SparseMatrix> GraphOperator(nn::Architecture arch,
                                           const AttributedGraph& graph) {
  switch (arch) {
    case nn::Architecture::kGcn2:
      return NormalizedAdjacency(graph.num_nodes(), graph.edges(),
                                 std::nullopt, /*add_self_loops=*/true);
    case nn::Architecture::kSage:
      return NeighborMeanOperator(graph.num_nodes(), graph.edges());
    case nn::Architecture::kGin:
      return GinAggregationOperator(graph.num_nodes(), graph.edges(), 0.0);
    default:
      return absl::InvalidArgumentError(absl::StrCat(
          "not a classifier architecture: ",
          std::string(nn::ArchitectureName(arch))));
  }
}

absl::StatusOr<nn::Var> Forward(nn::Architecture arch,
                                const SparseMatrix& op, nn::Var x,
                                const std::vector<nn::Var>& p, double dropout,
                                bool training, std::mt19937_64& rng) {
  nn::Var hidden;
  switch (arch) {
    case nn::Architecture::kGcn2: {
      FG_ASSIGN_OR_RETURN(nn::Var h, nn::GcnLayer(op, x, p[0]));
      hidden = nn::AddBias(h, p[1]);
      break;
    }
    case nn::Architecture::kSage: {
      FG_ASSIGN_OR_RETURN(nn::Var h, nn::SageLayer(op, x, p[0], p[1]));
      hidden = nn::AddBias(h, p[2]);
      break;
    }
    case nn::Architecture::kGin: {
      FG_ASSIGN_OR_RETURN(hidden,
                          nn::GinLayer(op, x, {p[0], p[1], p[2], p[3]}));
      break;
    }
    default:
      return absl::InvalidArgumentError("not a classifier architecture");
  }
  const size_t n = p.size();
  nn::Var dropped = nn::Dropout(nn::Relu(hidden), dropout, training, rng);
  FG_ASSIGN_OR_RETURN(nn::Var logits,
                      nn::LinearForward(dropped, p[n - 2], p[n - 1]));
  return nn::Sigmoid(logits);
}

absl::Status CheckShapes(const nn::ModelParams& params, int in_dim) {
  if (params.size() == 0) return absl::InvalidArgumentError("empty model");
  const int hidden = static_cast<int>(params.params()[0].value.cols());
  const auto expected = ExpectedShapes(params.arch(), in_dim, hidden);
  if (expected.size() != params.params().size()) {
    return absl::InvalidArgumentError("parameter count does not match arch");
  }
  for (size_t i = 0; i < expected.size(); ++i) {
    const nn::NamedParam& p = params.params()[i];
    if (p.name != expected[i].first ||
        p.value.rows() != expected[i].second.first ||
        p.value.cols() != expected[i].second.second) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "parameter '%s' is %dx%d; expected '%s' %dx%d", p.name,
          p.value.rows(), p.value.cols(), expected[i].first,
          expected[i].second.first, expected[i].second.second));
    }
  }
  return params.CheckFinite();
}

absl::StatusOr<Eigen::VectorXd> PredictWithOperator(
    const nn::ModelParams& params, const SparseMatrix& op,
    const Eigen::MatrixXd& features) {
  nn::Tape tape;
  std::vector<nn::Var> vars;
  for (const nn::NamedParam& p : params.params()) {
    vars.push_back(tape.Constant(p.value));
  }
  std::mt19937_64 unused_rng(0);
  FG_ASSIGN_OR_RETURN(nn::Var p,
                      Forward(params.arch(), op, tape.Constant(features), vars,
                              0.0, /*training=*/false, unused_rng));
  return Eigen::VectorXd(p.value()
                             .col(0)
                             .cwiseMax(nn::kProbabilityClamp)
                             .cwiseMin(1.0 - nn::kProbabilityClamp));
}

double ValidationAccuracy(const Eigen::VectorXd& prob,
                          const AttributedGraph& graph,
                          const std::vector<int>& nodes) {
  if (nodes.empty()) return 0.0;
  int correct = 0;
  for (int v : nodes) {
    correct += (prob(v) > kDecisionThreshold ? 1 : 0) == graph.labels()[v];
  }
  return static_cast<double>(correct) / nodes.size();
}

}  // namespace

absl::Status ClassifierConfig::Validate() const {
  if (arch != nn::Architecture::kGcn2 && arch != nn::Architecture::kSage &&
      arch != nn::Architecture::kGin) {
    return absl::InvalidArgumentError("classifier arch must be gcn, sage or gin");
  }
  if (hidden < 1) return absl::InvalidArgumentError("hidden must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    return absl::InvalidArgumentError("dropout must lie in [0, 1)");
  }
  if (epochs < 0) return absl::InvalidArgumentError("epochs must be >= 0");
  if (!(lr > 0.0)) return absl::InvalidArgumentError("lr must be positive");
  if (weight_decay < 0.0) {
    return absl::InvalidArgumentError("weight_decay must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<nn::Architecture> ParseClassifierArch(std::string_view name) {
  if (name == "gcn") return nn::Architecture::kGcn2;
  if (name == "sage") return nn::Architecture::kSage;
  if (name == "gin") return nn::Architecture::kGin;
  return absl::InvalidArgumentError(absl::StrCat(
      "unknown classifier '", std::string(name), "' (expected gcn|sage|gin)"));
}

std::string_view ClassifierArchName(nn::Architecture arch) {
  switch (arch) {
    case nn::Architecture::kGcn2:
      return "gcn";
    case nn::Architecture::kSage:
      return "sage";
    case nn::Architecture::kGin:
      return "gin";
    default:
      return nn::ArchitectureName(arch);
  }
}

std::vector<std::pair<std::string, std::pair<int, int>>> ExpectedShapes(
    nn::Architecture arch, int in_dim, int hidden) {
  std::vector<std::pair<std::string, std::pair<int, int>>> shapes;
  switch (arch) {
    case nn::Architecture::kGcn2:
      shapes = {{"gcn.w", {in_dim, hidden}}, {"gcn.b", {1, hidden}}};
      break;
    case nn::Architecture::kSage:
      shapes = {{"sage.w_self", {in_dim, hidden}},
                {"sage.w_neigh", {in_dim, hidden}},
                {"sage.b", {1, hidden}}};
      break;
    case nn::Architecture::kGin:
      shapes = {{"gin.w1", {in_dim, hidden}},
                {"gin.b1", {1, hidden}},
                {"gin.w2", {hidden, hidden}},
                {"gin.b2", {1, hidden}}};
      break;
    default:
      return shapes;
  }
  shapes.push_back({"head.w", {hidden, 1}});
  shapes.push_back({"head.b", {1, 1}});
  return shapes;
}

absl::StatusOr<TrainedClassifier> TrainClassifier(const AttributedGraph& graph,
                                                  const DataSplit& split,
                                                  const ClassifierConfig& cfg,
                                                  uint64_t seed) {
  FG_RETURN_IF_ERROR(cfg.Validate());
  FG_RETURN_IF_ERROR(ValidateSplit(split, graph.num_nodes()));
  Eigen::MatrixXd targets(split.train.size(), 1);
  for (size_t i = 0; i < split.train.size(); ++i) {
    targets(i, 0) = graph.labels()[split.train[i]];
  }
  if (targets.sum() == 0 || targets.sum() == targets.rows()) {
    return absl::FailedPreconditionError(
        "training nodes contain a single label class");
  }
  FG_ASSIGN_OR_RETURN(const SparseMatrix op, GraphOperator(cfg.arch, graph));

  nn::ModelParams params(cfg.arch);
  std::mt19937_64 init_rng(DeriveSeed(seed, kInitStream));
  for (const auto& [name, shape] :
       ExpectedShapes(cfg.arch, graph.num_features(), cfg.hidden)) {
    // Biases start at zero, weights uniform in +-1/sqrt(fan_in).
    const bool is_bias = name[name.rfind('.') + 1] == 'b';
    params.Add(name, is_bias
                         ? Eigen::MatrixXd::Zero(shape.first, shape.second)
                         : nn::UniformInit(shape.first, shape.second, init_rng));
  }
  std::mt19937_64 dropout_rng(DeriveSeed(seed, kDropoutStream));
  nn::Adam adam({.lr = cfg.lr, .weight_decay = cfg.weight_decay});

  TrainedClassifier best{params, 0, -1.0, 0.0};
  for (int epoch = 0; epoch <= cfg.epochs; ++epoch) {
    // Checkpoint selection on the current parameters.
    FG_ASSIGN_OR_RETURN(Eigen::VectorXd prob,
                        PredictWithOperator(params, op, graph.features()));
    const double val_acc = ValidationAccuracy(prob, graph, split.val);
    // Ties go to the later, better-fit checkpoint.
    if (val_acc >= best.best_val_acc) {
      best.params = params;
      best.best_epoch = epoch;
      best.best_val_acc = val_acc;
    }
    best.final_val_acc = val_acc;
    if (epoch == cfg.epochs) break;

    nn::Tape tape;
    std::vector<nn::Var> vars = params.Bind(tape);
    FG_ASSIGN_OR_RETURN(
        nn::Var p, Forward(cfg.arch, op, tape.Constant(graph.features()), vars,
                           cfg.dropout, /*training=*/true, dropout_rng));
    nn::Var loss =
        nn::BinaryCrossEntropy(nn::GatherRows(p, split.train), targets);
    if (!std::isfinite(loss.scalar())) {
      return absl::InternalError(absl::StrFormat(
          "classifier loss is not finite at epoch %d", epoch));
    }
    tape.Backward(loss);
    std::vector<Eigen::MatrixXd> grads;
    for (const nn::Var& v : vars) grads.push_back(v.grad());
    FG_RETURN_IF_ERROR(adam.Step(params.params(), grads));
  }
  return best;
}

absl::StatusOr<Eigen::VectorXd> PredictProbabilities(
    const nn::ModelParams& params, const AttributedGraph& graph) {
  FG_RETURN_IF_ERROR(CheckShapes(params, graph.num_features()));
  FG_ASSIGN_OR_RETURN(const SparseMatrix op, GraphOperator(params.arch(), graph));
  return PredictWithOperator(params, op, graph.features());
}

absl::StatusOr<MetricsReport> EvaluateClassifier(const TrainedClassifier& clf,
                                                 const AttributedGraph& graph,
                                                 const DataSplit& split,
                                                 uint64_t seed) {
  FG_ASSIGN_OR_RETURN(Eigen::VectorXd prob,
                      PredictProbabilities(clf.params, graph));
  return ComputeMetrics(prob, graph.labels(), graph.sensitive(), split.test,
                        seed);
}

std::string ClassifierToJson(const nn::ModelParams& params) {
  nlohmann::ordered_json j;
  j["format_version"] = kFormatVersion;
  j["arch"] = std::string(nn::ArchitectureName(params.arch()));
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const nn::NamedParam& p : params.params()) {
    nlohmann::ordered_json entry;
    entry["name"] = p.name;
    entry["rows"] = p.value.rows();
    entry["cols"] = p.value.cols();
    std::vector<double> data;
    for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < p.value.cols(); ++c) {
        data.push_back(p.value(r, c));
      }
    }
    entry["data"] = std::move(data);
    list.push_back(std::move(entry));
  }
  j["params"] = std::move(list);
  return j.dump(2) + "\n";
}

absl::StatusOr<nn::ModelParams> ClassifierFromJson(std::string_view json) {
  nlohmann::json j = nlohmann::json::parse(json, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("model blob is not a JSON object");
  }
  if (!j.contains("format_version") || j["format_version"] != kFormatVersion) {
    return absl::InvalidArgumentError("unsupported model format_version");
  }
  if (!j.contains("arch") || !j["arch"].is_string() || !j.contains("params") ||
      !j["params"].is_array()) {
    return absl::InvalidArgumentError("model blob lacks arch or params");
  }
  FG_ASSIGN_OR_RETURN(nn::Architecture arch,
                      nn::ParseArchitecture(j["arch"].get<std::string>()));
  nn::ModelParams params(arch);
  for (const auto& entry : j["params"]) {
    if (!entry.contains("name") || !entry.contains("rows") ||
        !entry.contains("cols") || !entry.contains("data") ||
        !entry["rows"].is_number_integer() ||
        !entry["cols"].is_number_integer() || !entry["data"].is_array()) {
      return absl::InvalidArgumentError("malformed parameter entry");
    }
    const int rows = entry["rows"].get<int>();
    const int cols = entry["cols"].get<int>();
    const auto& data = entry["data"];
    if (rows < 0 || cols < 0 ||
        data.size() != static_cast<size_t>(rows) * cols) {
      return absl::InvalidArgumentError(absl::StrCat(
          "parameter '", entry["name"].dump(), "' data does not match shape"));
    }
    Eigen::MatrixXd value(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (!data[r * cols + c].is_number()) {
          return absl::InvalidArgumentError("non-numeric parameter value");
        }
        value(r, c) = data[r * cols + c].get<double>();
      }
    }
    params.Add(entry["name"].get<std::string>(), std::move(value));
  }
  if (params.size() == 0) return absl::InvalidArgumentError("empty model");
  FG_RETURN_IF_ERROR(
      CheckShapes(params, static_cast<int>(params.params()[0].value.rows())));
  return params;
}

}  // namespace fairgraph
