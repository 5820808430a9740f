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


#include "fairgraph/synth.h"

#include <cmath>
#include <numeric>
#include <random>

#include "absl/strings/str_cat.h"
#include "fairgraph/random.h"
#include "fairgraph/status_macros.h"

namespace fairgraph {
namespace {

// Seed streams of one scenario draw.
enum Stream : uint64_t {
  kBiasedStream = 1,
  kUnbiasedStream = 2,
  kSbmStream = 3,
  kRggStream = 4,
  kLabelWeightStream = 5,
  kLabelDrawStream = 6,
};

int PlanTotal(const std::vector<int>& plan) {
  return std::accumulate(plan.begin(), plan.end(), 0);
}

absl::Status ValidateProbability(double p, std::string_view what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(what), " must lie in [0, 1], got ", p));
  }
  return absl::OkStatus();
}

// Number of failures before the next success of a Bernoulli(p) stream.
int64_t GeometricSkip(double p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = unit(rng);
  return static_cast<int64_t>(std::floor(std::log1p(-r) / std::log1p(-p)));
}

// Appends Bernoulli(p) edges among the pairs of a single block.
void SampleWithinBlock(int offset, int size, double p, std::mt19937_64& rng,
                       std::vector<Edge>& edges) {
  if (p <= 0.0 || size < 2) return;
  if (p >= 1.0) {
    for (int i = 0; i < size; ++i) {
      for (int j = i + 1; j < size; ++j) edges.push_back({offset + i, offset + j});
    }
    return;
  }
  // Walks the strict lower triangle row by row.
  int64_t v = 1, w = -1;
  while (v < size) {
    w += 1 + GeometricSkip(p, rng);
    while (w >= v && v < size) {
      w -= v;
      ++v;
    }
    if (v < size) edges.push_back({offset + static_cast<int>(w), offset + static_cast<int>(v)});
  }
}

// Appends Bernoulli(p) edges among the pairs across two blocks.
void SampleAcrossBlocks(int offset_a, int size_a, int offset_b, int size_b,
                        double p, std::mt19937_64& rng,
                        std::vector<Edge>& edges) {
  if (p <= 0.0 || size_a == 0 || size_b == 0) return;
  const int64_t total = static_cast<int64_t>(size_a) * size_b;
  int64_t index = -1;
  while (true) {
    index += p >= 1.0 ? 1 : 1 + GeometricSkip(p, rng);
    if (index >= total) break;
    edges.push_back({offset_a + static_cast<int>(index / size_b),
                     offset_b + static_cast<int>(index % size_b)});
  }
}

Eigen::MatrixXd SampleGaussianRows(const std::vector<Eigen::VectorXd>& means,
                                   const std::vector<int>& group,
                                   std::mt19937_64& rng) {
  const int dim = static_cast<int>(means[0].size());
  Eigen::MatrixXd out(group.size(), dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (size_t i = 0; i < group.size(); ++i) {
    for (int c = 0; c < dim; ++c) out(i, c) = means[group[i]](c) + normal(rng);
  }
  return out;
}

}  // namespace

int SynthSpec::num_nodes() const { return PlanTotal(minor_plan); }

absl::Status SynthSpec::Validate() const {
  for (const auto* plan : {&minor_plan, &major_plan, &sbm_sizes}) {
    if (plan->empty()) return absl::InvalidArgumentError("empty block plan");
    for (int s : *plan) {
      if (s < 0) return absl::InvalidArgumentError("negative block size");
    }
  }
  const int n = PlanTotal(minor_plan);
  if (n < 1 || PlanTotal(major_plan) != n || PlanTotal(sbm_sizes) != n) {
    return absl::InvalidArgumentError(
        "block plans and SBM sizes must cover the same node count");
  }
  FG_RETURN_IF_ERROR(ValidateProbability(sbm_p_in, "sbm_p_in"));
  FG_RETURN_IF_ERROR(ValidateProbability(sbm_p_out, "sbm_p_out"));
  if (!(rgg_radius > 0.0)) {
    return absl::InvalidArgumentError("rgg_radius must be positive");
  }
  if (!std::isfinite(label_bias)) {
    return absl::InvalidArgumentError("label_bias must be finite");
  }
  if (!(label_sharpness > 0.0) || !std::isfinite(label_sharpness)) {
    return absl::InvalidArgumentError("label_sharpness must be positive");
  }
  return absl::OkStatus();
}

std::vector<int> PlanMembership(const std::vector<int>& plan) {
  std::vector<int> group;
  for (size_t run = 0; run < plan.size(); ++run) {
    group.insert(group.end(), plan[run], static_cast<int>(run % 2));
  }
  return group;
}

absl::StatusOr<BiasedFeatures> GenBiasedFeatures(const SynthSpec& spec,
                                                 uint64_t seed) {
  FG_RETURN_IF_ERROR(spec.Validate());
  const std::vector<int> minor = PlanMembership(spec.minor_plan);
  const std::vector<int> major = PlanMembership(spec.major_plan);
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd left =
      SampleGaussianRows({spec.minor_mean0, spec.minor_mean1}, minor, rng);
  const Eigen::MatrixXd right =
      SampleGaussianRows({spec.major_mean0, spec.major_mean1}, major, rng);

  const int n = spec.num_nodes();
  BiasedFeatures out;
  out.features.resize(n, 6);
  out.features << left, right;
  out.sensitive.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    out.sensitive(i, 0) = major[i];
    out.sensitive(i, 1) = minor[i];
  }
  return out;
}

absl::StatusOr<Eigen::MatrixXd> GenUnbiasedFeatures(const SynthSpec& spec,
                                                    uint64_t seed) {
  FG_RETURN_IF_ERROR(spec.Validate());
  std::mt19937_64 rng(seed);
  const std::vector<int> group(spec.num_nodes(), 0);
  return SampleGaussianRows({spec.unbiased_mean}, group, rng);
}

absl::StatusOr<std::vector<Edge>> GenSbm(const std::vector<int>& sizes,
                                         double p_in, double p_out,
                                         uint64_t seed) {
  FG_RETURN_IF_ERROR(ValidateProbability(p_in, "p_in"));
  FG_RETURN_IF_ERROR(ValidateProbability(p_out, "p_out"));
  std::vector<int> offsets(sizes.size(), 0);
  for (size_t b = 1; b < sizes.size(); ++b) {
    offsets[b] = offsets[b - 1] + sizes[b - 1];
  }
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (size_t a = 0; a < sizes.size(); ++a) {
    SampleWithinBlock(offsets[a], sizes[a], p_in, rng, edges);
    for (size_t b = a + 1; b < sizes.size(); ++b) {
      SampleAcrossBlocks(offsets[a], sizes[a], offsets[b], sizes[b], p_out,
                         rng, edges);
    }
  }
  return CanonicalizeEdges(std::move(edges));
}

absl::StatusOr<std::vector<Edge>> GenRgg(int num_nodes, double radius,
                                         uint64_t seed) {
  if (num_nodes < 0) return absl::InvalidArgumentError("negative node count");
  if (!(radius > 0.0)) {
    return absl::InvalidArgumentError("radius must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> xs(num_nodes), ys(num_nodes);
  for (int i = 0; i < num_nodes; ++i) {
    xs[i] = unit(rng);
    ys[i] = unit(rng);
  }
  // Bucket into cells of side >= radius; only adjacent cells can connect.
  const int cells = std::max(1, std::min(1024, static_cast<int>(1.0 / radius)));
  auto cell_of = [cells](double c) {
    return std::min(cells - 1, static_cast<int>(c * cells));
  };
  std::vector<std::vector<int>> grid(static_cast<size_t>(cells) * cells);
  for (int i = 0; i < num_nodes; ++i) {
    grid[cell_of(xs[i]) * cells + cell_of(ys[i])].push_back(i);
  }
  const double r2 = radius * radius;
  std::vector<Edge> edges;
  for (int i = 0; i < num_nodes; ++i) {
    const int cx = cell_of(xs[i]), cy = cell_of(ys[i]);
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        const int nx = cx + dx, ny = cy + dy;
        if (nx < 0 || ny < 0 || nx >= cells || ny >= cells) continue;
        for (int j : grid[nx * cells + ny]) {
          if (j <= i) continue;
          const double ddx = xs[i] - xs[j], ddy = ys[i] - ys[j];
          if (ddx * ddx + ddy * ddy <= r2) edges.push_back({i, j});
        }
      }
    }
  }
  return CanonicalizeEdges(std::move(edges));
}

std::string_view ScenarioName(ScenarioCase c) {
  switch (c) {
    case ScenarioCase::kBFDT:
      return "BFDT";
    case ScenarioCase::kDFBT:
      return "DFBT";
    case ScenarioCase::kBFBT:
      return "BFBT";
    case ScenarioCase::kDFDT:
      return "DFDT";
  }
  return "unknown";
}

absl::StatusOr<ScenarioCase> ParseScenario(std::string_view name) {
  for (ScenarioCase c : kAllScenarios) {
    if (ScenarioName(c) == name) return c;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown scenario '", std::string(name), "'"));
}

Eigen::VectorXd LabelWeights(const SynthSpec& spec, uint64_t seed) {
  // Unit directions of the two sensitive mean shifts.
  Eigen::VectorXd minor_dir = Eigen::VectorXd::Zero(6);
  Eigen::VectorXd major_dir = Eigen::VectorXd::Zero(6);
  minor_dir.head<3>() = (spec.minor_mean1 - spec.minor_mean0).normalized();
  major_dir.tail<3>() = (spec.major_mean1 - spec.major_mean0).normalized();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd w(6);
  for (int c = 0; c < 6; ++c) w(c) = normal(rng);
  // minor_dir and major_dir have disjoint supports, hence are orthogonal.
  w -= w.dot(minor_dir) * minor_dir;
  w -= w.dot(major_dir) * major_dir;
  w.normalize();
  w += spec.label_bias * (minor_dir + major_dir) / std::sqrt(2.0);
  return w.normalized();
}

absl::StatusOr<AttributedGraph> AssembleCase(ScenarioCase c,
                                             const SynthSpec& spec,
                                             uint64_t seed) {
  FG_RETURN_IF_ERROR(spec.Validate());
  const bool biased_features =
      c == ScenarioCase::kBFBT || c == ScenarioCase::kBFDT;
  const bool biased_topology =
      c == ScenarioCase::kBFBT || c == ScenarioCase::kDFBT;
  const int n = spec.num_nodes();

  FG_ASSIGN_OR_RETURN(BiasedFeatures biased,
                      GenBiasedFeatures(spec, DeriveSeed(seed, kBiasedStream)));
  Eigen::MatrixXd features = std::move(biased.features);
  if (!biased_features) {
    FG_ASSIGN_OR_RETURN(
        features, GenUnbiasedFeatures(spec, DeriveSeed(seed, kUnbiasedStream)));
  }
  std::vector<Edge> edges;
  if (biased_topology) {
    FG_ASSIGN_OR_RETURN(edges, GenSbm(spec.sbm_sizes, spec.sbm_p_in,
                                      spec.sbm_p_out,
                                      DeriveSeed(seed, kSbmStream)));
  } else {
    FG_ASSIGN_OR_RETURN(
        edges, GenRgg(n, spec.rgg_radius, DeriveSeed(seed, kRggStream)));
  }

  const Eigen::VectorXd w =
      LabelWeights(spec, DeriveSeed(seed, kLabelWeightStream));
  std::mt19937_64 label_rng(DeriveSeed(seed, kLabelDrawStream));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    const double z = spec.label_sharpness * features.row(i).dot(w);
    labels[i] = unit(label_rng) < 1.0 / (1.0 + std::exp(-z)) ? 1 : 0;
  }

  std::vector<std::string> names;
  for (int col = 0; col < 6; ++col) names.push_back(absl::StrCat("x", col));
  return AttributedGraph::Create(n, std::move(edges), std::move(features),
                                 std::move(biased.sensitive), std::move(labels),
                                 std::move(names), {"s_major", "s_minor"});
}

}  // namespace fairgraph
