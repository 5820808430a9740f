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


#ifndef FAIRGRAPH_PIPELINE_H_
#define FAIRGRAPH_PIPELINE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "fairgraph/attack.h"
#include "fairgraph/classifier.h"
#include "fairgraph/feature_debias.h"
#include "fairgraph/graph.h"
#include "fairgraph/metrics.h"
#include "fairgraph/synth.h"
#include "fairgraph/topology_debias.h"

namespace fairgraph {

struct CsvDataset {
  std::string features;
  std::string edges;
  std::string labels;
  std::vector<std::string> sensitive_columns;
};

struct SynthDataset {
  ScenarioCase scenario = ScenarioCase::kBFBT;
  SynthSpec spec;
  // When true every run seed draws its own graph; otherwise `seed` is used.
  bool regenerate_per_seed = true;
  uint64_t seed = 0;
};

// Per-dataset defaults for lambda2, lambda3, lambda4 and r_p.
struct Preset {
  std::string_view name;
  double lambda2, lambda3, lambda4, r_p;
};
inline constexpr std::array<Preset, 3> kPresets = {{
    {"german", 3.5e4, 0.02, 1.29e4, 0.65},
    {"recidivism", 5e4, 100.0, 515.0, 0.72},
    {"credit", 8e4, 100.0, 1.34e5, 0.724},
}};

struct RunConfig {
  std::optional<CsvDataset> csv;
  std::optional<SynthDataset> synth;
  std::string preset = "german";

  double r = 0.2;
  double r_s = 0.7;
  ReconstructOptions feature;  // lambda1..lambda3, epochs, lr, weight decay.
  FairMpOptions topology;      // lambda4, epochs, lr, weight decay, patience.
  double r_p = 0.65;
  ClassifierConfig classifier;

  std::array<double, 3> split_ratios = {0.5, 0.25, 0.25};
  uint64_t split_seed = 0;
  std::vector<uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  Ablation ablation = Ablation::kNone;

  std::vector<double> attack_fractions = kDefaultKnownFractions;
  int attack_epochs = 1000;
  double attack_lr = 1e-3;
  int attack_hidden = 16;

  int jobs = 1;

  absl::Status Validate() const;
};

// Strict JSON: unknown keys are errors. Keys absent from the document keep
// their defaults; a "preset" fills lambda2..lambda4 and r_p before explicit
// keys are applied.
absl::StatusOr<RunConfig> ParseRunConfig(std::string_view json,
                                         std::string_view base_dir = "");
// Full effective configuration, as recorded in manifests.
std::string RunConfigToJson(const RunConfig& cfg);

// The dataset of one run seed.
absl::StatusOr<AttributedGraph> LoadDataset(const RunConfig& cfg,
                                            uint64_t seed);

enum class Variant { kVanilla, kMapping };

// Everything one seed produced.
struct SeedOutcome {
  uint64_t seed = 0;
  absl::Status status;
  MetricsReport metrics;
  std::optional<MaskReport> mask;
  std::vector<std::string> feature_names;  // Names the mask indices refer to.
  std::optional<EdgeWeightSet> edge_weights;
  std::optional<PrunedTopology> pruned;
  std::optional<nn::ModelParams> model;
  Eigen::MatrixXd debiased_features;  // Classifier input features.
  std::vector<Edge> classifier_edges;  // Classifier input topology.
};

// Runs one seed end to end. Errors land in outcome.status.
SeedOutcome RunSeed(const RunConfig& cfg, Variant variant,
                    const AttributedGraph& graph, uint64_t seed);

// Runs every configured seed on the worker pool.
std::vector<SeedOutcome> RunBattery(const RunConfig& cfg, Variant variant);

std::string VariantName(const RunConfig& cfg, Variant variant);

std::string MetricsCsv(const RunConfig& cfg, Variant variant,
                       const std::vector<SeedOutcome>& outcomes);
std::string AggregateCsv(const std::vector<SeedOutcome>& outcomes,
                         int num_sensitive);

enum ExitCode { kExitOk = 0, kExitConfigError = 1, kExitPartial = 2 };

// Runs the battery and writes metrics.csv, aggregate.csv, manifest.json and
// per-seed artifacts under `out_dir`. Returns the process exit code.
absl::StatusOr<int> RunAndWrite(const RunConfig& cfg, Variant variant,
                                const std::string& out_dir);

inline const std::vector<double> kDefaultSweepValues = {0,   1e-5, 1e-3, 1,
                                                        1e3, 1e5,  1e7};

// One MAPPING battery per value of `param` (lambda2, lambda3 or lambda4);
// writes sweep.csv (param,value,metric,mean,std,n) and manifest.json.
absl::StatusOr<int> RunParamSweep(const RunConfig& cfg,
                                  const std::string& param,
                                  const std::vector<double>& values,
                                  const std::string& out_dir);

// Leakage curves. Synthetic configs compare the four scenario pairs; CSV
// datasets compare the original pair with the MAPPING output of the first
// seed. Writes leakage.csv and manifest.json.
absl::StatusOr<int> RunAttackSweep(const RunConfig& cfg,
                                   const std::string& out_dir);

// Writes the dataset graph of the first seed in the CSV schema.
absl::StatusOr<int> RunSynth(const RunConfig& cfg, const std::string& out_dir);

}  // namespace fairgraph

#endif  // FAIRGRAPH_PIPELINE_H_
