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


#ifndef FAIRGRAPH_SYNTH_H_
#define FAIRGRAPH_SYNTH_H_

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairgraph/graph.h"

namespace fairgraph {

// Parameters of the two-attribute synthetic benchmark. Block plans list
// consecutive run lengths alternating group 0, group 1, group 0, ...
struct SynthSpec {
  // Feature columns 0-2 follow the minor attribute: mean minor_mean0 for
  // group 0 and minor_mean1 for group 1.
  Eigen::Vector3d minor_mean0{-10.0, -2.0, -5.0};
  Eigen::Vector3d minor_mean1{10.0, 2.0, 5.0};
  // Feature columns 3-5 follow the major attribute.
  Eigen::Vector3d major_mean0{-12.0, -8.0, -4.0};
  Eigen::Vector3d major_mean1{12.0, 8.0, 4.0};
  // Mean of the sensitive-independent features (identity covariance).
  Eigen::Matrix<double, 6, 1> unbiased_mean{0.0, 1.0, 0.0, 1.0, 0.0, 1.0};

  std::vector<int> minor_plan{100, 200, 200, 600, 100, 700, 100, 500};
  std::vector<int> major_plan{300, 1200, 400, 600};

  // Contiguous blocks in node order.
  std::vector<int> sbm_sizes{500, 2000};
  double sbm_p_in = 5e-3;
  double sbm_p_out = 1e-7;
  double rgg_radius = 0.033;

  // Labels: y ~ Bernoulli(sigmoid(label_sharpness * w . x)) with unit w.
  // `label_bias` tilts w toward the sensitive group-mean directions; 0 keeps
  // w orthogonal to them so labels carry no sensitive signal through the
  // biased features. Sharpness 1 leaves labels barely learnable because the
  // per-node signal w . x has unit noise variance.
  double label_bias = 0.05;
  double label_sharpness = 3.0;

  int num_nodes() const;
  absl::Status Validate() const;
};

struct BiasedFeatures {
  Eigen::MatrixXd features;   // n x 6.
  Eigen::MatrixXd sensitive;  // n x 2: column 0 major, column 1 minor.
};

// Group membership per node from a block plan (0/1 alternating runs).
std::vector<int> PlanMembership(const std::vector<int>& plan);

absl::StatusOr<BiasedFeatures> GenBiasedFeatures(const SynthSpec& spec,
                                                 uint64_t seed);
absl::StatusOr<Eigen::MatrixXd> GenUnbiasedFeatures(const SynthSpec& spec,
                                                    uint64_t seed);

// Stochastic block model over contiguous blocks, sampled by geometric
// skipping so the cost is proportional to the number of edges.
absl::StatusOr<std::vector<Edge>> GenSbm(const std::vector<int>& sizes,
                                         double p_in, double p_out,
                                         uint64_t seed);

// Random geometric graph on the unit square: edge iff distance <= radius.
absl::StatusOr<std::vector<Edge>> GenRgg(int num_nodes, double radius,
                                         uint64_t seed);

enum class ScenarioCase { kBFDT, kDFBT, kBFBT, kDFDT };

std::string_view ScenarioName(ScenarioCase c);
absl::StatusOr<ScenarioCase> ParseScenario(std::string_view name);
inline constexpr std::array<ScenarioCase, 4> kAllScenarios = {
    ScenarioCase::kBFBT, ScenarioCase::kBFDT, ScenarioCase::kDFBT,
    ScenarioCase::kDFDT};

// Unit label direction derived from `spec` and `seed`.
Eigen::VectorXd LabelWeights(const SynthSpec& spec, uint64_t seed);

// Biased features pair with the SBM, debiased features with the RGG. The
// sensitive attributes are shared by all four cases for a given spec.
absl::StatusOr<AttributedGraph> AssembleCase(ScenarioCase c,
                                             const SynthSpec& spec,
                                             uint64_t seed);

}  // namespace fairgraph

#endif  // FAIRGRAPH_SYNTH_H_
