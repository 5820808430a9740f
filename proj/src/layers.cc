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


#include "fairgraph/layers.h"

#include <cassert>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace fairgraph::nn {
namespace {

absl::Status ShapeError(std::string_view op, Eigen::Index r1, Eigen::Index c1,
                        Eigen::Index r2, Eigen::Index c2) {
  return absl::InvalidArgumentError(absl::StrFormat(
      "%s: shape mismatch %dx%d vs %dx%d", std::string(op), r1, c1, r2, c2));
}

}  // namespace

std::string_view ArchitectureName(Architecture arch) {
  switch (arch) {
    case Architecture::kMlp1:
      return "mlp1";
    case Architecture::kGcn1:
      return "gcn1";
    case Architecture::kGcn2:
      return "gcn2";
    case Architecture::kSage:
      return "sage";
    case Architecture::kGin:
      return "gin";
  }
  return "unknown";
}

absl::StatusOr<Architecture> ParseArchitecture(std::string_view name) {
  for (Architecture a : {Architecture::kMlp1, Architecture::kGcn1,
                         Architecture::kGcn2, Architecture::kSage,
                         Architecture::kGin}) {
    if (ArchitectureName(a) == name) return a;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown architecture '", std::string(name), "'"));
}

void ModelParams::Add(std::string name, Eigen::MatrixXd value) {
  params_.push_back({std::move(name), std::move(value)});
}

int ModelParams::Find(std::string_view name) const {
  for (size_t i = 0; i < params_.size(); ++i) {
    if (params_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const Eigen::MatrixXd& ModelParams::at(std::string_view name) const {
  const int i = Find(name);
  assert(i >= 0);
  return params_[i].value;
}

std::vector<Var> ModelParams::Bind(Tape& tape) const {
  std::vector<Var> vars;
  vars.reserve(params_.size());
  for (const NamedParam& p : params_) vars.push_back(tape.Leaf(p.value));
  return vars;
}

absl::Status ModelParams::CheckFinite() const {
  for (const NamedParam& p : params_) {
    if (!p.value.allFinite()) {
      return absl::InternalError(
          absl::StrCat("parameter '", p.name, "' is not finite"));
    }
  }
  return absl::OkStatus();
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  if (a.arch_ != b.arch_ || a.params_.size() != b.params_.size()) return false;
  for (size_t i = 0; i < a.params_.size(); ++i) {
    const auto& pa = a.params_[i];
    const auto& pb = b.params_[i];
    if (pa.name != pb.name || pa.value.rows() != pb.value.rows() ||
        pa.value.cols() != pb.value.cols() || pa.value != pb.value) {
      return false;
    }
  }
  return true;
}

Eigen::MatrixXd UniformInit(int rows, int cols, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(rows));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Eigen::MatrixXd w(rows, cols);
  // Column-major fill order is part of the seeded contract.
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) w(i, j) = dist(rng);
  }
  return w;
}

absl::StatusOr<Var> LinearForward(Var x, Var w, Var b) {
  if (x.cols() != w.rows()) {
    return ShapeError("linear", x.rows(), x.cols(), w.rows(), w.cols());
  }
  if (b.rows() != 1 || b.cols() != w.cols()) {
    return ShapeError("linear bias", b.rows(), b.cols(), 1, w.cols());
  }
  return AddBias(MatMul(x, w), b);
}

absl::StatusOr<Var> GcnLayer(const SparseMatrix& a_norm, Var h, Var w) {
  if (a_norm.rows() != h.rows() || a_norm.cols() != h.rows()) {
    return ShapeError("gcn adjacency", a_norm.rows(), a_norm.cols(), h.rows(),
                      h.rows());
  }
  if (h.cols() != w.rows()) {
    return ShapeError("gcn", h.rows(), h.cols(), w.rows(), w.cols());
  }
  return SpMM(a_norm, MatMul(h, w));
}

absl::StatusOr<Var> SageLayer(const SparseMatrix& neighbor_mean, Var h,
                              Var w_self, Var w_neigh) {
  if (neighbor_mean.rows() != h.rows() || neighbor_mean.cols() != h.rows()) {
    return ShapeError("sage operator", neighbor_mean.rows(),
                      neighbor_mean.cols(), h.rows(), h.rows());
  }
  if (h.cols() != w_self.rows() || w_self.rows() != w_neigh.rows() ||
      w_self.cols() != w_neigh.cols()) {
    return ShapeError("sage", w_self.rows(), w_self.cols(), w_neigh.rows(),
                      w_neigh.cols());
  }
  return Add(MatMul(h, w_self), MatMul(SpMM(neighbor_mean, h), w_neigh));
}

absl::StatusOr<Var> GinLayer(const SparseMatrix& aggregation, Var h,
                             const GinMlp& mlp) {
  if (aggregation.rows() != h.rows() || aggregation.cols() != h.rows()) {
    return ShapeError("gin operator", aggregation.rows(), aggregation.cols(),
                      h.rows(), h.rows());
  }
  Var pooled = SpMM(aggregation, h);
  absl::StatusOr<Var> hidden = LinearForward(pooled, mlp.w1, mlp.b1);
  if (!hidden.ok()) return hidden.status();
  return LinearForward(Relu(*hidden), mlp.w2, mlp.b2);
}

}  // namespace fairgraph::nn
