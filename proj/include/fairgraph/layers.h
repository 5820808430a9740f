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


#ifndef FAIRGRAPH_LAYERS_H_
#define FAIRGRAPH_LAYERS_H_

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairgraph/autodiff.h"
#include "fairgraph/graph.h"

namespace fairgraph::nn {

enum class Architecture { kMlp1, kGcn1, kGcn2, kSage, kGin };

std::string_view ArchitectureName(Architecture arch);
absl::StatusOr<Architecture> ParseArchitecture(std::string_view name);

struct NamedParam {
  std::string name;
  Eigen::MatrixXd value;
};

// Ordered, named parameter tensors of one model. Order is part of the
// model's identity: optimizers and serialization rely on it.
class ModelParams {
 public:
  ModelParams() = default;
  explicit ModelParams(Architecture arch) : arch_(arch) {}

  Architecture arch() const { return arch_; }
  void Add(std::string name, Eigen::MatrixXd value);
  int size() const { return static_cast<int>(params_.size()); }
  std::vector<NamedParam>& params() { return params_; }
  const std::vector<NamedParam>& params() const { return params_; }
  // Index of `name`, or -1.
  int Find(std::string_view name) const;
  const Eigen::MatrixXd& at(std::string_view name) const;

  // Registers every parameter as a leaf on `tape`, in order.
  std::vector<Var> Bind(Tape& tape) const;

  absl::Status CheckFinite() const;

  friend bool operator==(const ModelParams& a, const ModelParams& b);

 private:
  Architecture arch_ = Architecture::kMlp1;
  std::vector<NamedParam> params_;
};

// Weights ~ Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)).
Eigen::MatrixXd UniformInit(int rows, int cols, std::mt19937_64& rng);

// y = x W + b, with b a 1 x out row broadcast over rows.
absl::StatusOr<Var> LinearForward(Var x, Var w, Var b);

// H' = A_norm H W.
absl::StatusOr<Var> GcnLayer(const SparseMatrix& a_norm, Var h, Var w);

// H' = H W_self + mean_neighbors(H) W_neigh. `neighbor_mean` comes from
// NeighborMeanOperator, so isolated nodes contribute H W_self only.
absl::StatusOr<Var> SageLayer(const SparseMatrix& neighbor_mean, Var h,
                              Var w_self, Var w_neigh);

// H' = mlp((1 + eps) H + sum_neighbors H) with a one-hidden-layer ReLU MLP.
// `aggregation` comes from GinAggregationOperator.
struct GinMlp {
  Var w1, b1, w2, b2;
};
absl::StatusOr<Var> GinLayer(const SparseMatrix& aggregation, Var h,
                             const GinMlp& mlp);

}  // namespace fairgraph::nn

#endif  // FAIRGRAPH_LAYERS_H_
