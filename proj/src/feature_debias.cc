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


#include "fairgraph/feature_debias.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "absl/strings/str_format.h"
#include "fairgraph/autodiff.h"
#include "fairgraph/random.h"
#include "fairgraph/status_macros.h"
#include "json.hpp"

namespace fairgraph {
namespace {

std::vector<int> Sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Indices of the x entries ranked first by `before`, ties by lower index.
template <typename Less>
std::vector<int> TopX(const Eigen::VectorXd& scores, int x, Less before) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return before(scores(a), scores(b));
  });
  order.resize(x);
  return Sorted(std::move(order));
}

absl::StatusOr<double> ColumnDcor2(const Eigen::VectorXd& column,
                                   const Eigen::MatrixXd& other) {
  if (other.cols() == 1) return Dcor2FastUnivariate(column, other.col(0));
  return Dcor2(column, other);
}

}  // namespace

absl::StatusOr<PremaskScores> ComputePremaskScores(const AttributedGraph& g) {
  const int d = g.num_features();
  const Eigen::MatrixXd labels = g.labels_as_vector();
  PremaskScores scores;
  scores.sensitive.resize(d);
  scores.label.resize(d);
  for (int i = 0; i < d; ++i) {
    const Eigen::VectorXd column = g.features().col(i);
    FG_ASSIGN_OR_RETURN(scores.sensitive(i), ColumnDcor2(column, g.sensitive()));
    FG_ASSIGN_OR_RETURN(scores.label(i), ColumnDcor2(column, labels));
  }
  return scores;
}

absl::StatusOr<MaskReport> PremaskSelect(const PremaskScores& scores,
                                         double r, double r_s) {
  if (!(r > 0.0 && r < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("distributed ratio r must lie in (0, 1), got %g", r));
  }
  if (!(r_s > 0.0 && r_s < 1.0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sensitive threshold r_s must lie in (0, 1), got %g", r_s));
  }
  if (scores.sensitive.size() != scores.label.size()) {
    return absl::InvalidArgumentError("score vectors differ in length");
  }
  const int d = static_cast<int>(scores.sensitive.size());
  MaskReport report;
  report.scores = scores;
  report.r = r;
  report.r_s = r_s;
  // The epsilon keeps products such as 0.3 * 10 from flooring to 2.
  report.x = static_cast<int>(std::floor(r * d + 1e-9));

  report.set_top = TopX(scores.sensitive, report.x,
                        [](double a, double b) { return a > b; });
  report.set_les = TopX(scores.label, report.x,
                        [](double a, double b) { return a < b; });
  std::set_intersection(report.set_top.begin(), report.set_top.end(),
                        report.set_les.begin(), report.set_les.end(),
                        std::back_inserter(report.set_int));
  for (int i = 0; i < d; ++i) {
    if (scores.sensitive(i) >= r_s) report.set_sen.push_back(i);
  }
  std::set_union(report.set_int.begin(), report.set_int.end(),
                 report.set_sen.begin(), report.set_sen.end(),
                 std::back_inserter(report.set_uni));
  return report;
}

std::string MaskReport::ToJson(
    const std::vector<std::string>& feature_names) const {
  nlohmann::ordered_json j;
  j["r"] = r;
  j["r_s"] = r_s;
  j["x"] = x;
  j["set_top"] = set_top;
  j["set_les"] = set_les;
  j["set_int"] = set_int;
  j["set_sen"] = set_sen;
  j["set_uni"] = set_uni;
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < scores.sensitive.size(); ++i) {
    nlohmann::ordered_json f;
    f["index"] = i;
    if (static_cast<size_t>(i) < feature_names.size()) {
      f["name"] = feature_names[i];
    }
    f["dcor2_sensitive"] = scores.sensitive(i);
    f["dcor2_label"] = scores.label(i);
    features.push_back(std::move(f));
  }
  j["features"] = std::move(features);
  return j.dump(2) + "\n";
}

absl::StatusOr<MaskedFeatures> ApplyMask(
    const Eigen::MatrixXd& features, const std::vector<std::string>& names,
    const MaskReport& report) {
  const int d = static_cast<int>(features.cols());
  std::vector<bool> drop(d, false);
  for (int i : report.set_uni) {
    if (i < 0 || i >= d) {
      return absl::OutOfRangeError(
          absl::StrFormat("mask index %d outside %d features", i, d));
    }
    drop[i] = true;
  }
  MaskedFeatures out;
  for (int i = 0; i < d; ++i) {
    if (!drop[i]) out.kept_columns.push_back(i);
  }
  if (out.kept_columns.empty()) {
    return absl::FailedPreconditionError(
        "pre-masking removed every feature; nothing left to reconstruct");
  }
  out.features.resize(features.rows(), out.kept_columns.size());
  for (size_t c = 0; c < out.kept_columns.size(); ++c) {
    out.features.col(c) = features.col(out.kept_columns[c]);
    if (static_cast<size_t>(out.kept_columns[c]) < names.size()) {
      out.names.push_back(names[out.kept_columns[c]]);
    }
  }
  return out;
}

FeatureReconstructor::FeatureReconstructor(Eigen::MatrixXd masked,
                                           Eigen::MatrixXd sensitive,
                                           const ReconstructOptions& options,
                                           uint64_t seed)
    : masked_(std::move(masked)),
      sensitive_(std::move(sensitive)),
      sensitive_distances_(std::make_unique<CenteredDistances>(sensitive_)),
      options_(options),
      adversary_(nn::Architecture::kMlp1),
      weight_optimizer_({.lr = options.lr,
                         .weight_decay = options.weight_decay}),
      adversary_optimizer_({.lr = options.lr,
                            .weight_decay = options.weight_decay}) {
  const int dm = static_cast<int>(masked_.cols());
  const int k = static_cast<int>(sensitive_.cols());
  weights_.push_back({"feature_weights", Eigen::MatrixXd::Ones(dm, 1)});
  std::mt19937_64 rng(seed);
  adversary_.Add("adv.w", nn::UniformInit(dm, k, rng));
  adversary_.Add("adv.b", Eigen::MatrixXd::Zero(1, k));
}

absl::StatusOr<FeatureReconstructor> FeatureReconstructor::Create(
    Eigen::MatrixXd masked, Eigen::MatrixXd sensitive,
    const ReconstructOptions& options, uint64_t seed) {
  if (masked.cols() < 1) {
    return absl::InvalidArgumentError("no features to reconstruct");
  }
  if (masked.rows() < 2 || masked.rows() != sensitive.rows() ||
      sensitive.cols() < 1) {
    return absl::InvalidArgumentError(
        "features and sensitive attributes need matching rows (n >= 2)");
  }
  if (!masked.allFinite()) {
    return absl::InvalidArgumentError("masked features are not finite");
  }
  if (options.epochs < 0 || !(options.lr > 0.0) || options.lambda1 < 0.0 ||
      options.lambda2 < 0.0 || options.lambda3 < 0.0 ||
      options.weight_decay < 0.0) {
    return absl::InvalidArgumentError("invalid reconstruction options");
  }
  return FeatureReconstructor(std::move(masked), std::move(sensitive), options,
                              seed);
}

Eigen::MatrixXd FeatureReconstructor::Debiased() const {
  return masked_ * weights_[0].value.col(0).asDiagonal();
}

absl::Status FeatureReconstructor::AdversaryStep() {
  nn::Tape tape;
  std::vector<nn::Var> params = adversary_.Bind(tape);
  nn::Var x_hat = tape.Constant(Debiased());
  FG_ASSIGN_OR_RETURN(nn::Var logits,
                      nn::LinearForward(x_hat, params[0], params[1]));
  nn::Var loss = nn::BinaryCrossEntropy(nn::Sigmoid(logits), sensitive_);
  if (!std::isfinite(loss.scalar())) {
    return absl::InternalError(absl::StrFormat(
        "adversary loss is not finite at epoch %d", epoch_));
  }
  tape.Backward(loss);
  std::vector<Eigen::MatrixXd> grads;
  for (const nn::Var& p : params) grads.push_back(p.grad());
  return adversary_optimizer_.Step(adversary_.params(), grads);
}

absl::StatusOr<EpochLoss> FeatureReconstructor::MainStep() {
  nn::Tape tape;
  nn::Var w = tape.Leaf(weights_[0].value);
  nn::Var x_hat = nn::ScaleColumns(masked_, w);
  nn::Var residual = nn::Sub(tape.Constant(masked_), x_hat);
  nn::Var reconstruction = nn::FrobeniusNorm(residual);
  nn::Var fairness = nn::DcovLoss(x_hat, *sensitive_distances_);
  nn::Var adv_w = tape.Constant(adversary_.params()[0].value);
  nn::Var adv_b = tape.Constant(adversary_.params()[1].value);
  FG_ASSIGN_OR_RETURN(nn::Var logits, nn::LinearForward(x_hat, adv_w, adv_b));
  nn::Var adversary = nn::BinaryCrossEntropy(nn::Sigmoid(logits), sensitive_);
  nn::Var total =
      nn::Sub(nn::Add(reconstruction, nn::Scale(fairness, options_.lambda2)),
              nn::Scale(adversary, options_.lambda3));

  EpochLoss loss;
  loss.reconstruction = reconstruction.scalar();
  loss.sparsity = weights_[0].value.cwiseAbs().sum();
  loss.fairness = fairness.scalar();
  loss.adversary = adversary.scalar();
  loss.total = total.scalar() + options_.lambda1 * loss.sparsity;
  if (!std::isfinite(loss.total)) {
    return absl::InternalError(
        absl::StrFormat("reconstruction loss is not finite at epoch %d", epoch_));
  }
  tape.Backward(total);
  const Eigen::MatrixXd grad = w.grad();
  FG_RETURN_IF_ERROR(weight_optimizer_.Step(weights_, {&grad, 1}));
  weights_[0].value.col(0) = nn::ProximalL1Step(
      weights_[0].value.col(0), options_.lr, options_.lambda1);
  return loss;
}

absl::StatusOr<FeatureDebiasResult> FeatureReconstructor::Run() && {
  for (; epoch_ < options_.epochs; ++epoch_) {
    FG_RETURN_IF_ERROR(AdversaryStep());
    FG_ASSIGN_OR_RETURN(EpochLoss loss, MainStep());
    trajectory_.push_back(loss);
  }
  FeatureDebiasResult result;
  result.debiased = Debiased();
  result.weights = weights();
  result.masked = std::move(masked_);
  result.adversary = std::move(adversary_);
  result.trajectory = std::move(trajectory_);
  return result;
}

}  // namespace fairgraph
