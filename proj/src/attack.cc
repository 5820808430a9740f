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


#include "fairgraph/attack.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "absl/strings/str_cat.h"
#include "fairgraph/autodiff.h"
#include "fairgraph/csv.h"
#include "fairgraph/dcov.h"
#include "fairgraph/metrics.h"
#include "fairgraph/optim.h"
#include "fairgraph/parallel.h"
#include "fairgraph/random.h"
#include "fairgraph/status_macros.h"

namespace fairgraph {
namespace {

constexpr int kMaxSamples = 10;
constexpr uint64_t kInitStream = 100;

std::vector<int> ResolveTargets(const AttackScenario& s) {
  if (!s.target_columns.empty()) return s.target_columns;
  std::vector<int> all(s.sensitive.cols());
  std::iota(all.begin(), all.end(), 0);
  return all;
}

absl::Status ValidateScenario(const AttackScenario& s) {
  const int n = s.num_nodes();
  if (n < 2 || s.sensitive.rows() != n ||
      static_cast<int>(s.labels.size()) != n) {
    return absl::InvalidArgumentError(
        "attack scenario needs matching features, labels and sensitive rows");
  }
  if (!(s.known_fraction > 0.0 && s.known_fraction < 1.0)) {
    return absl::InvalidArgumentError("known fraction must lie in (0, 1)");
  }
  for (int c : ResolveTargets(s)) {
    if (c < 0 || c >= s.sensitive.cols()) {
      return absl::OutOfRangeError("attack target column out of range");
    }
  }
  for (const Edge& e : s.edges) {
    if (e.u < 0 || e.v >= n || e.u >= e.v) {
      return absl::InvalidArgumentError("attack topology has an invalid edge");
    }
  }
  if (s.epochs < 0 || !(s.lr > 0.0) || s.hidden < 1) {
    return absl::InvalidArgumentError("invalid attacker training options");
  }
  return absl::OkStatus();
}

bool BothClasses(const Eigen::MatrixXd& s, const std::vector<int>& nodes,
                 int column) {
  bool seen[2] = {false, false};
  for (int v : nodes) seen[s(v, column) > 0.5 ? 1 : 0] = true;
  return seen[0] && seen[1];
}

}  // namespace

KnownSensitiveView::KnownSensitiveView(const Eigen::MatrixXd& sensitive,
                                       const std::vector<int>& known,
                                       const std::vector<int>& columns)
    : known_(known),
      columns_(columns),
      row_of_(sensitive.rows(), -1),
      values_(known.size(), columns.size()) {
  // Only known rows are copied in; the rest never enter the view.
  for (size_t i = 0; i < known.size(); ++i) {
    row_of_[known[i]] = static_cast<int>(i);
    for (size_t c = 0; c < columns.size(); ++c) {
      values_(i, c) = sensitive(known[i], columns[c]);
    }
  }
}

double KnownSensitiveView::at(int node, int target) const {
  if (node < 0 || node >= static_cast<int>(row_of_.size()) ||
      row_of_[node] < 0) {
    ++forbidden_accesses_;
    return std::numeric_limits<double>::quiet_NaN();
  }
  return values_(row_of_[node], target);
}

absl::StatusOr<Attacker> TrainAttacker(const AttackScenario& scenario,
                                       const KnownSensitiveView& view) {
  FG_RETURN_IF_ERROR(ValidateScenario(scenario));
  const int n = scenario.num_nodes();
  const int d = static_cast<int>(scenario.features.cols());
  const int targets = view.num_columns();
  const std::vector<int>& known = view.known();
  if (known.empty()) return absl::InvalidArgumentError("empty known set");

  Eigen::MatrixXd inputs = Eigen::MatrixXd::Zero(n, d + 2);
  inputs.leftCols(d) = scenario.features;
  for (int i = 0; i < n; ++i) inputs(i, d + scenario.labels[i]) = 1.0;
  FG_ASSIGN_OR_RETURN(
      SparseMatrix adjacency,
      NormalizedAdjacency(n, scenario.edges, std::nullopt, true));
  // The trunk is linear, so propagation can be applied once up front.
  const Eigen::MatrixXd propagated = adjacency * inputs;
  Eigen::MatrixXd known_propagated(known.size(), d + 2);
  Eigen::MatrixXd known_targets(known.size(), targets);
  for (size_t i = 0; i < known.size(); ++i) {
    known_propagated.row(i) = propagated.row(known[i]);
    for (int c = 0; c < targets; ++c) known_targets(i, c) = view.at(known[i], c);
  }

  std::mt19937_64 rng(DeriveSeed(scenario.seed, kInitStream));
  Attacker attacker;
  attacker.params = nn::ModelParams(nn::Architecture::kGcn1);
  attacker.params.Add("trunk.w", nn::UniformInit(d + 2, scenario.hidden, rng));
  attacker.params.Add("trunk.b", Eigen::MatrixXd::Zero(1, scenario.hidden));
  attacker.params.Add("head.w", nn::UniformInit(scenario.hidden, targets, rng));
  attacker.params.Add("head.b", Eigen::MatrixXd::Zero(1, targets));

  nn::Adam adam({.lr = scenario.lr});
  auto forward = [&](nn::Tape& tape, const Eigen::MatrixXd& x,
                     const std::vector<nn::Var>& p) -> absl::StatusOr<nn::Var> {
    FG_ASSIGN_OR_RETURN(nn::Var h,
                        nn::LinearForward(tape.Constant(x), p[0], p[1]));
    FG_ASSIGN_OR_RETURN(nn::Var logits, nn::LinearForward(h, p[2], p[3]));
    return nn::Sigmoid(logits);
  };
  for (int epoch = 0; epoch < scenario.epochs; ++epoch) {
    nn::Tape tape;
    std::vector<nn::Var> vars = attacker.params.Bind(tape);
    FG_ASSIGN_OR_RETURN(nn::Var prob, forward(tape, known_propagated, vars));
    // Averaging over the n x targets entries averages the per-column BCEs.
    nn::Var loss = nn::BinaryCrossEntropy(prob, known_targets);
    tape.Backward(loss);
    std::vector<Eigen::MatrixXd> grads;
    for (const nn::Var& v : vars) grads.push_back(v.grad());
    FG_RETURN_IF_ERROR(adam.Step(attacker.params.params(), grads));
  }
  nn::Tape tape;
  std::vector<nn::Var> consts;
  for (const auto& p : attacker.params.params()) {
    consts.push_back(tape.Constant(p.value));
  }
  FG_ASSIGN_OR_RETURN(nn::Var prob, forward(tape, propagated, consts));
  attacker.probabilities = prob.value();
  return attacker;
}

double AttackResult::MeanAccuracy() const {
  return Summarize(accuracy).mean;
}
double AttackResult::MeanCorrelation() const {
  return Summarize(correlation).mean;
}
double AttackResult::MeanMajorityAccuracy() const {
  return Summarize(majority_accuracy).mean;
}

absl::StatusOr<AttackResult> RunAttack(const AttackScenario& scenario) {
  FG_RETURN_IF_ERROR(ValidateScenario(scenario));
  const int n = scenario.num_nodes();
  const std::vector<int> targets = ResolveTargets(scenario);
  const int m = std::clamp(
      static_cast<int>(std::lround(scenario.known_fraction * n)), 1, n - 1);

  AttackResult result;
  std::vector<int> known;
  bool found = false;
  for (int attempt = 0; attempt < kMaxSamples && !found; ++attempt) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(DeriveSeed(scenario.seed, attempt));
    std::shuffle(order.begin(), order.end(), rng);
    known.assign(order.begin(), order.begin() + m);
    std::sort(known.begin(), known.end());
    result.samples_drawn = attempt + 1;
    found = std::all_of(targets.begin(), targets.end(), [&](int c) {
      return BothClasses(scenario.sensitive, known, c);
    });
  }
  result.known = known;
  if (!found) {
    result.degenerate = true;
    return result;
  }

  KnownSensitiveView view(scenario.sensitive, known, targets);
  FG_ASSIGN_OR_RETURN(Attacker attacker, TrainAttacker(scenario, view));

  std::vector<bool> is_known(n, false);
  for (int v : known) is_known[v] = true;
  std::vector<int> unknown;
  for (int v = 0; v < n; ++v) {
    if (!is_known[v]) unknown.push_back(v);
  }
  for (size_t t = 0; t < targets.size(); ++t) {
    const int column = targets[t];
    double known_positive = 0.0;
    for (int v : known) known_positive += view.at(v, static_cast<int>(t));
    const int majority = known_positive * 2 >= known.size() ? 1 : 0;

    Eigen::VectorXd prob(unknown.size()), truth(unknown.size());
    int correct = 0, majority_correct = 0;
    for (size_t i = 0; i < unknown.size(); ++i) {
      const int v = unknown[i];
      const int s = scenario.sensitive(v, column) > 0.5 ? 1 : 0;
      prob(i) = attacker.probabilities(v, t);
      truth(i) = s;
      correct += (prob(i) > kDecisionThreshold ? 1 : 0) == s;
      majority_correct += majority == s;
    }
    const double count = static_cast<double>(unknown.size());
    result.accuracy.push_back(correct / count);
    result.majority_accuracy.push_back(majority_correct / count);
    FG_ASSIGN_OR_RETURN(double corr, Dcor2FastUnivariate(prob, truth));
    result.correlation.push_back(corr);
  }
  return result;
}

absl::StatusOr<std::vector<LeakageRow>> LeakageSweep(
    const std::vector<AttackInput>& inputs,
    const std::vector<double>& fractions, const std::vector<uint64_t>& seeds,
    int workers) {
  if (inputs.empty() || fractions.empty() || seeds.empty()) {
    return absl::InvalidArgumentError(
        "leakage sweep needs inputs, fractions and seeds");
  }
  const int jobs =
      static_cast<int>(inputs.size() * fractions.size() * seeds.size());
  std::vector<absl::StatusOr<AttackResult>> results(
      jobs, absl::UnknownError("not run"));
  ParallelFor(jobs, workers, [&](int job) {
    const size_t s = job % seeds.size();
    const size_t f = (job / seeds.size()) % fractions.size();
    const size_t i = job / (seeds.size() * fractions.size());
    AttackScenario scenario = inputs[i].scenario;
    scenario.known_fraction = fractions[f];
    scenario.seed = seeds[s];
    results[job] = RunAttack(scenario);
  });

  std::vector<LeakageRow> rows;
  int job = 0;
  for (const AttackInput& input : inputs) {
    for (double p : fractions) {
      std::vector<double> acc, corr, floor;
      for (size_t s = 0; s < seeds.size(); ++s, ++job) {
        if (!results[job].ok()) return results[job].status();
        if (results[job]->degenerate) continue;
        acc.push_back(results[job]->MeanAccuracy());
        corr.push_back(results[job]->MeanCorrelation());
        floor.push_back(results[job]->MeanMajorityAccuracy());
      }
      for (const auto& [metric, values] :
           {std::pair<const char*, const std::vector<double>*>{"accuracy", &acc},
            {"correlation", &corr},
            {"majority_accuracy", &floor}}) {
        const Summary summary = Summarize(*values);
        rows.push_back({input.name, p, metric, summary.mean, summary.std,
                        summary.n});
      }
    }
  }
  return rows;
}

std::string LeakageCsv(const std::vector<LeakageRow>& rows) {
  std::string out = "pair,p,metric,mean,std,n\n";
  for (const LeakageRow& r : rows) {
    absl::StrAppend(&out, r.pair, ",", FormatShortest(r.p), ",", r.metric, ",",
                    r.n > 0 ? FormatShortest(r.mean) : "undefined", ",",
                    r.n > 0 ? FormatShortest(r.std) : "undefined", ",", r.n,
                    "\n");
  }
  return out;
}

}  // namespace fairgraph
