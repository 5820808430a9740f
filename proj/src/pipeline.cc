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


#include "fairgraph/pipeline.h"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "fairgraph/csv.h"
#include "fairgraph/dcov.h"
#include "fairgraph/parallel.h"
#include "fairgraph/random.h"
#include "fairgraph/status_macros.h"
#include "json.hpp"

#ifndef FAIRGRAPH_VERSION
#define FAIRGRAPH_VERSION "unknown"
#endif

namespace fairgraph {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

enum Stream : uint64_t {
  kFeatureStream = 11,
  kTopologyStream = 12,
  kClassifierStream = 13,
};

// ---- Strict JSON helpers -------------------------------------------------

absl::Status CheckKeys(const Json& obj, std::string_view where,
                       std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config: '", std::string(where), "' must be an object"));
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (std::string_view key : allowed) known = known || key == item.key();
    if (!known) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config: unknown key '", item.key(), "' in ", std::string(where)));
    }
  }
  return absl::OkStatus();
}

absl::Status TypeError(std::string_view key, std::string_view expected) {
  return absl::InvalidArgumentError(absl::StrCat(
      "config: '", std::string(key), "' must be ", std::string(expected)));
}

absl::Status ReadDouble(const Json& obj, const char* key, double& out) {
  if (!obj.contains(key)) return absl::OkStatus();
  if (!obj[key].is_number()) return TypeError(key, "a number");
  out = obj[key].get<double>();
  return absl::OkStatus();
}

absl::Status ReadInt(const Json& obj, const char* key, int& out) {
  if (!obj.contains(key)) return absl::OkStatus();
  if (!obj[key].is_number_integer()) return TypeError(key, "an integer");
  out = obj[key].get<int>();
  return absl::OkStatus();
}

absl::Status ReadU64(const Json& obj, const char* key, uint64_t& out) {
  if (!obj.contains(key)) return absl::OkStatus();
  if (!obj[key].is_number_unsigned()) {
    return TypeError(key, "a non-negative integer");
  }
  out = obj[key].get<uint64_t>();
  return absl::OkStatus();
}

absl::Status ReadBool(const Json& obj, const char* key, bool& out) {
  if (!obj.contains(key)) return absl::OkStatus();
  if (!obj[key].is_boolean()) return TypeError(key, "a boolean");
  out = obj[key].get<bool>();
  return absl::OkStatus();
}

absl::Status ReadString(const Json& obj, const char* key, std::string& out) {
  if (!obj.contains(key)) return absl::OkStatus();
  if (!obj[key].is_string()) return TypeError(key, "a string");
  out = obj[key].get<std::string>();
  return absl::OkStatus();
}

template <typename T>
absl::Status ReadArray(const Json& obj, const char* key, std::vector<T>& out) {
  if (!obj.contains(key)) return absl::OkStatus();
  const Json& a = obj[key];
  if (!a.is_array()) return TypeError(key, "an array");
  std::vector<T> values;
  for (const Json& v : a) {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) return TypeError(key, "an array of numbers");
    } else if constexpr (std::is_same_v<T, uint64_t>) {
      if (!v.is_number_unsigned()) {
        return TypeError(key, "an array of non-negative integers");
      }
    } else {
      if (!v.is_string()) return TypeError(key, "an array of strings");
    }
    values.push_back(v.get<T>());
  }
  out = std::move(values);
  return absl::OkStatus();
}

std::string ResolvePath(const std::string& path, std::string_view base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(std::string(base_dir)) / p).string();
}

// ---- Output helpers -------------------------------------------------------

std::string Number(double v) { return FormatShortest(v); }

std::string Optional(const std::optional<double>& v) {
  return v.has_value() ? Number(*v) : "undefined";
}

absl::Status EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create directory ", dir, ": ", ec.message()));
  }
  return absl::OkStatus();
}

std::string JoinPath(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// Named metric columns of a report, in CSV order.
std::vector<std::pair<std::string, std::optional<double>>> MetricColumns(
    const MetricsReport& m, int num_sensitive) {
  std::vector<std::pair<std::string, std::optional<double>>> cols = {
      {"acc", m.acc}, {"f1", m.f1}, {"auroc", m.auroc}};
  for (int c = 0; c < num_sensitive; ++c) {
    cols.push_back({absl::StrCat("dsp_", c),
                    c < static_cast<int>(m.delta_sp.size()) ? m.delta_sp[c]
                                                            : std::nullopt});
    cols.push_back({absl::StrCat("deo_", c),
                    c < static_cast<int>(m.delta_eo.size()) ? m.delta_eo[c]
                                                            : std::nullopt});
  }
  cols.push_back({"sens_dcor", m.sensitive_dcor});
  return cols;
}

int NumSensitive(const std::vector<SeedOutcome>& outcomes) {
  for (const SeedOutcome& o : outcomes) {
    if (o.status.ok()) return static_cast<int>(o.metrics.delta_sp.size());
  }
  return 0;
}

std::vector<std::pair<std::string, Summary>> Summaries(
    const std::vector<SeedOutcome>& outcomes, int num_sensitive) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  for (const SeedOutcome& o : outcomes) {
    if (!o.status.ok()) continue;
    const auto cols = MetricColumns(o.metrics, num_sensitive);
    if (names.empty()) {
      for (const auto& c : cols) names.push_back(c.first);
      values.resize(cols.size());
    }
    for (size_t i = 0; i < cols.size(); ++i) {
      if (cols[i].second.has_value()) values[i].push_back(*cols[i].second);
    }
  }
  if (names.empty()) {
    MetricsReport empty;
    empty.delta_sp.resize(num_sensitive);
    empty.delta_eo.resize(num_sensitive);
    for (const auto& c : MetricColumns(empty, num_sensitive)) {
      names.push_back(c.first);
    }
    values.resize(names.size());
  }
  std::vector<std::pair<std::string, Summary>> out;
  for (size_t i = 0; i < names.size(); ++i) {
    out.push_back({names[i], Summarize(values[i])});
  }
  return out;
}

OrderedJson ManifestBase(const RunConfig& cfg, std::string_view command) {
  OrderedJson m;
  m["tool"] = "fairgraph";
  m["version"] = FAIRGRAPH_VERSION;
  m["command"] = std::string(command);
  m["config"] = OrderedJson::parse(RunConfigToJson(cfg));
  m["evaluation_nodes"] = "test split";
  m["split"] = "label-stratified, ratios and seed as configured";
  return m;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace

// ---- Configuration ----------------------------------------------------------

absl::Status RunConfig::Validate() const {
  if (csv.has_value() == synth.has_value()) {
    return absl::InvalidArgumentError(
        "config: exactly one of dataset.csv and dataset.synth is required");
  }
  if (csv.has_value()) {
    if (csv->features.empty() || csv->edges.empty() || csv->labels.empty()) {
      return absl::InvalidArgumentError(
          "config: dataset.csv needs features, edges and labels paths");
    }
    if (csv->sensitive_columns.empty()) {
      return absl::InvalidArgumentError(
          "config: dataset.csv.sensitive_columns must not be empty");
    }
    for (const std::string* path : {&csv->features, &csv->edges, &csv->labels}) {
      if (!std::filesystem::exists(*path)) {
        return absl::InvalidArgumentError(
            absl::StrCat("config: dataset file not found: ", *path));
      }
    }
  }
  if (synth.has_value()) FG_RETURN_IF_ERROR(synth->spec.Validate());
  if (!(r > 0.0 && r < 1.0)) {
    return absl::InvalidArgumentError("config: r must lie in (0, 1)");
  }
  if (!(r_s > 0.0 && r_s < 1.0)) {
    return absl::InvalidArgumentError("config: r_s must lie in (0, 1)");
  }
  if (!(r_p >= 0.0 && r_p <= 1.0)) {
    return absl::InvalidArgumentError("config: r_p must lie in [0, 1]");
  }
  if (feature.lambda1 < 0 || feature.lambda2 < 0 || feature.lambda3 < 0 ||
      topology.lambda4 < 0) {
    return absl::InvalidArgumentError("config: lambdas must be non-negative");
  }
  if (feature.epochs < 0 || topology.epochs < 0 || !(feature.lr > 0.0) ||
      !(topology.lr > 0.0) || feature.weight_decay < 0 ||
      topology.weight_decay < 0 || topology.patience < 0) {
    return absl::InvalidArgumentError("config: invalid debiasing optimizer");
  }
  FG_RETURN_IF_ERROR(classifier.Validate());
  double total = 0.0;
  for (double ratio : split_ratios) {
    if (!(ratio > 0.0)) {
      return absl::InvalidArgumentError("config: split ratios must be > 0");
    }
    total += ratio;
  }
  if (total > 1.0 + 1e-12) {
    return absl::InvalidArgumentError("config: split ratios sum above 1");
  }
  if (seeds.empty()) return absl::InvalidArgumentError("config: no seeds");
  for (double p : attack_fractions) {
    if (!(p > 0.0 && p < 1.0)) {
      return absl::InvalidArgumentError(
          "config: attack fractions must lie in (0, 1)");
    }
  }
  if (attack_fractions.empty() || attack_epochs < 0 || !(attack_lr > 0.0) ||
      attack_hidden < 1) {
    return absl::InvalidArgumentError("config: invalid attack settings");
  }
  if (jobs < 1) return absl::InvalidArgumentError("config: jobs must be >= 1");
  return absl::OkStatus();
}

absl::StatusOr<RunConfig> ParseRunConfig(std::string_view text,
                                         std::string_view base_dir) {
  const Json root = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    return absl::InvalidArgumentError("config: not valid JSON");
  }
  FG_RETURN_IF_ERROR(CheckKeys(
      root, "the top level",
      {"dataset", "preset", "r", "r_s", "lambda1", "lambda2", "lambda3",
       "lambda4", "r_p", "feature_epochs", "topology_epochs", "debias_lr",
       "debias_weight_decay", "topology_patience", "classifier", "split",
       "seeds", "ablation", "attack", "jobs"}));
  RunConfig cfg;

  FG_RETURN_IF_ERROR(ReadString(root, "preset", cfg.preset));
  const Preset* preset = nullptr;
  for (const Preset& p : kPresets) {
    if (p.name == cfg.preset) preset = &p;
  }
  if (preset == nullptr) {
    return absl::InvalidArgumentError(absl::StrCat(
        "config: unknown preset '", cfg.preset,
        "' (expected german, recidivism or credit)"));
  }
  cfg.feature.lambda2 = preset->lambda2;
  cfg.feature.lambda3 = preset->lambda3;
  cfg.topology.lambda4 = preset->lambda4;
  cfg.r_p = preset->r_p;

  if (!root.contains("dataset")) {
    return absl::InvalidArgumentError("config: 'dataset' is required");
  }
  const Json& dataset = root["dataset"];
  FG_RETURN_IF_ERROR(CheckKeys(dataset, "dataset", {"csv", "synth"}));
  if (dataset.contains("csv")) {
    const Json& c = dataset["csv"];
    FG_RETURN_IF_ERROR(CheckKeys(
        c, "dataset.csv", {"features", "edges", "labels", "sensitive_columns"}));
    CsvDataset csv;
    FG_RETURN_IF_ERROR(ReadString(c, "features", csv.features));
    FG_RETURN_IF_ERROR(ReadString(c, "edges", csv.edges));
    FG_RETURN_IF_ERROR(ReadString(c, "labels", csv.labels));
    FG_RETURN_IF_ERROR(ReadArray(c, "sensitive_columns", csv.sensitive_columns));
    csv.features = ResolvePath(csv.features, base_dir);
    csv.edges = ResolvePath(csv.edges, base_dir);
    csv.labels = ResolvePath(csv.labels, base_dir);
    cfg.csv = std::move(csv);
  }
  if (dataset.contains("synth")) {
    const Json& s = dataset["synth"];
    FG_RETURN_IF_ERROR(CheckKeys(
        s, "dataset.synth",
        {"scenario", "seed", "regenerate_per_seed", "label_bias",
         "label_sharpness", "sbm_p_in",
         "sbm_p_out", "rgg_radius"}));
    SynthDataset synth;
    std::string scenario(ScenarioName(synth.scenario));
    FG_RETURN_IF_ERROR(ReadString(s, "scenario", scenario));
    FG_ASSIGN_OR_RETURN(synth.scenario, ParseScenario(scenario));
    FG_RETURN_IF_ERROR(ReadU64(s, "seed", synth.seed));
    FG_RETURN_IF_ERROR(
        ReadBool(s, "regenerate_per_seed", synth.regenerate_per_seed));
    FG_RETURN_IF_ERROR(ReadDouble(s, "label_bias", synth.spec.label_bias));
    FG_RETURN_IF_ERROR(
        ReadDouble(s, "label_sharpness", synth.spec.label_sharpness));
    FG_RETURN_IF_ERROR(ReadDouble(s, "sbm_p_in", synth.spec.sbm_p_in));
    FG_RETURN_IF_ERROR(ReadDouble(s, "sbm_p_out", synth.spec.sbm_p_out));
    FG_RETURN_IF_ERROR(ReadDouble(s, "rgg_radius", synth.spec.rgg_radius));
    cfg.synth = std::move(synth);
  }

  FG_RETURN_IF_ERROR(ReadDouble(root, "r", cfg.r));
  FG_RETURN_IF_ERROR(ReadDouble(root, "r_s", cfg.r_s));
  FG_RETURN_IF_ERROR(ReadDouble(root, "lambda1", cfg.feature.lambda1));
  FG_RETURN_IF_ERROR(ReadDouble(root, "lambda2", cfg.feature.lambda2));
  FG_RETURN_IF_ERROR(ReadDouble(root, "lambda3", cfg.feature.lambda3));
  FG_RETURN_IF_ERROR(ReadDouble(root, "lambda4", cfg.topology.lambda4));
  FG_RETURN_IF_ERROR(ReadDouble(root, "r_p", cfg.r_p));
  FG_RETURN_IF_ERROR(ReadInt(root, "feature_epochs", cfg.feature.epochs));
  FG_RETURN_IF_ERROR(ReadInt(root, "topology_epochs", cfg.topology.epochs));
  double lr = cfg.feature.lr, wd = cfg.feature.weight_decay;
  FG_RETURN_IF_ERROR(ReadDouble(root, "debias_lr", lr));
  FG_RETURN_IF_ERROR(ReadDouble(root, "debias_weight_decay", wd));
  cfg.feature.lr = cfg.topology.lr = lr;
  cfg.feature.weight_decay = cfg.topology.weight_decay = wd;
  FG_RETURN_IF_ERROR(ReadInt(root, "topology_patience", cfg.topology.patience));

  if (root.contains("classifier")) {
    const Json& c = root["classifier"];
    FG_RETURN_IF_ERROR(CheckKeys(c, "classifier",
                                 {"arch", "hidden", "dropout", "epochs", "lr",
                                  "weight_decay"}));
    std::string arch(ClassifierArchName(cfg.classifier.arch));
    FG_RETURN_IF_ERROR(ReadString(c, "arch", arch));
    FG_ASSIGN_OR_RETURN(cfg.classifier.arch, ParseClassifierArch(arch));
    FG_RETURN_IF_ERROR(ReadInt(c, "hidden", cfg.classifier.hidden));
    FG_RETURN_IF_ERROR(ReadDouble(c, "dropout", cfg.classifier.dropout));
    FG_RETURN_IF_ERROR(ReadInt(c, "epochs", cfg.classifier.epochs));
    FG_RETURN_IF_ERROR(ReadDouble(c, "lr", cfg.classifier.lr));
    FG_RETURN_IF_ERROR(
        ReadDouble(c, "weight_decay", cfg.classifier.weight_decay));
  }
  if (root.contains("split")) {
    const Json& s = root["split"];
    FG_RETURN_IF_ERROR(CheckKeys(s, "split", {"ratios", "seed"}));
    std::vector<double> ratios(cfg.split_ratios.begin(), cfg.split_ratios.end());
    FG_RETURN_IF_ERROR(ReadArray(s, "ratios", ratios));
    if (ratios.size() != 3) {
      return absl::InvalidArgumentError("config: split.ratios needs 3 values");
    }
    std::copy(ratios.begin(), ratios.end(), cfg.split_ratios.begin());
    FG_RETURN_IF_ERROR(ReadU64(s, "seed", cfg.split_seed));
  }
  FG_RETURN_IF_ERROR(ReadArray(root, "seeds", cfg.seeds));
  if (root.contains("ablation")) {
    std::string ablation;
    FG_RETURN_IF_ERROR(ReadString(root, "ablation", ablation));
    FG_ASSIGN_OR_RETURN(cfg.ablation, ParseAblation(ablation));
  }
  if (root.contains("attack")) {
    const Json& a = root["attack"];
    FG_RETURN_IF_ERROR(
        CheckKeys(a, "attack", {"fractions", "epochs", "lr", "hidden"}));
    FG_RETURN_IF_ERROR(ReadArray(a, "fractions", cfg.attack_fractions));
    FG_RETURN_IF_ERROR(ReadInt(a, "epochs", cfg.attack_epochs));
    FG_RETURN_IF_ERROR(ReadDouble(a, "lr", cfg.attack_lr));
    FG_RETURN_IF_ERROR(ReadInt(a, "hidden", cfg.attack_hidden));
  }
  FG_RETURN_IF_ERROR(ReadInt(root, "jobs", cfg.jobs));
  FG_RETURN_IF_ERROR(cfg.Validate());
  return cfg;
}

std::string RunConfigToJson(const RunConfig& cfg) {
  OrderedJson j;
  OrderedJson dataset;
  if (cfg.csv.has_value()) {
    dataset["csv"] = {{"features", cfg.csv->features},
                      {"edges", cfg.csv->edges},
                      {"labels", cfg.csv->labels},
                      {"sensitive_columns", cfg.csv->sensitive_columns}};
  }
  if (cfg.synth.has_value()) {
    const SynthDataset& s = *cfg.synth;
    dataset["synth"] = {{"scenario", std::string(ScenarioName(s.scenario))},
                        {"seed", s.seed},
                        {"regenerate_per_seed", s.regenerate_per_seed},
                        {"label_bias", s.spec.label_bias},
                        {"label_sharpness", s.spec.label_sharpness},
                        {"sbm_p_in", s.spec.sbm_p_in},
                        {"sbm_p_out", s.spec.sbm_p_out},
                        {"rgg_radius", s.spec.rgg_radius}};
  }
  j["dataset"] = std::move(dataset);
  j["preset"] = cfg.preset;
  j["r"] = cfg.r;
  j["r_s"] = cfg.r_s;
  j["lambda1"] = cfg.feature.lambda1;
  j["lambda2"] = cfg.feature.lambda2;
  j["lambda3"] = cfg.feature.lambda3;
  j["lambda4"] = cfg.topology.lambda4;
  j["r_p"] = cfg.r_p;
  j["feature_epochs"] = cfg.feature.epochs;
  j["topology_epochs"] = cfg.topology.epochs;
  j["debias_lr"] = cfg.feature.lr;
  j["debias_weight_decay"] = cfg.feature.weight_decay;
  j["topology_patience"] = cfg.topology.patience;
  j["classifier"] = {
      {"arch", std::string(ClassifierArchName(cfg.classifier.arch))},
      {"hidden", cfg.classifier.hidden},
      {"dropout", cfg.classifier.dropout},
      {"epochs", cfg.classifier.epochs},
      {"lr", cfg.classifier.lr},
      {"weight_decay", cfg.classifier.weight_decay}};
  j["split"] = {{"ratios", cfg.split_ratios}, {"seed", cfg.split_seed}};
  j["seeds"] = cfg.seeds;
  j["ablation"] = std::string(AblationName(cfg.ablation));
  j["attack"] = {{"fractions", cfg.attack_fractions},
                 {"epochs", cfg.attack_epochs},
                 {"lr", cfg.attack_lr},
                 {"hidden", cfg.attack_hidden}};
  j["jobs"] = cfg.jobs;
  return j.dump(2);
}

// ---- Runs ---------------------------------------------------------------------

absl::StatusOr<AttributedGraph> LoadDataset(const RunConfig& cfg,
                                            uint64_t seed) {
  if (cfg.csv.has_value()) {
    return LoadGraph(cfg.csv->features, cfg.csv->edges, cfg.csv->labels,
                     cfg.csv->sensitive_columns);
  }
  if (cfg.synth.has_value()) {
    const SynthDataset& s = *cfg.synth;
    return AssembleCase(s.scenario, s.spec,
                        s.regenerate_per_seed ? seed : s.seed);
  }
  return absl::InvalidArgumentError("config has no dataset");
}

std::string VariantName(const RunConfig& cfg, Variant variant) {
  if (variant == Variant::kVanilla) return "vanilla";
  if (cfg.ablation == Ablation::kNone) return "mapping";
  return std::string(AblationName(cfg.ablation));
}

namespace {

absl::Status RunSeedImpl(const RunConfig& cfg, Variant variant,
                         const AttributedGraph& graph, uint64_t seed,
                         SeedOutcome& out) {
  const auto start = std::chrono::steady_clock::now();
  FG_ASSIGN_OR_RETURN(
      const DataSplit split,
      SplitStratified(graph, cfg.split_ratios, cfg.split_seed));

  Eigen::MatrixXd features = graph.features();
  std::vector<std::string> names = graph.feature_names();
  std::vector<Edge> edges = graph.edges();
  std::string timings;

  if (variant == Variant::kMapping) {
    const PipelineWiring wiring = WiringFor(cfg.ablation);
    if (wiring.premask) {
      auto t = std::chrono::steady_clock::now();
      FG_ASSIGN_OR_RETURN(const PremaskScores scores,
                          ComputePremaskScores(graph));
      FG_ASSIGN_OR_RETURN(MaskReport mask,
                          PremaskSelect(scores, cfg.r, cfg.r_s));
      FG_ASSIGN_OR_RETURN(MaskedFeatures masked,
                          ApplyMask(features, names, mask));
      out.mask = std::move(mask);
      out.feature_names = names;
      features = std::move(masked.features);
      names = std::move(masked.names);
      absl::StrAppendFormat(&timings, " premask=%.2fs", Seconds(t));
    }
    if (wiring.reconstruct) {
      auto t = std::chrono::steady_clock::now();
      FG_ASSIGN_OR_RETURN(
          FeatureReconstructor reconstructor,
          FeatureReconstructor::Create(features, graph.sensitive(),
                                       cfg.feature,
                                       DeriveSeed(seed, kFeatureStream)));
      FG_ASSIGN_OR_RETURN(FeatureDebiasResult result,
                          std::move(reconstructor).Run());
      features = std::move(result.debiased);
      absl::StrAppendFormat(&timings, " reconstruct=%.2fs", Seconds(t));
    }
    if (wiring.topology) {
      auto t = std::chrono::steady_clock::now();
      FG_ASSIGN_OR_RETURN(
          const FairMpProblem problem,
          FairMpProblem::Create(graph, features, split.train, split.val));
      FG_ASSIGN_OR_RETURN(
          FairMpResult fair,
          FairMpTrain(problem, cfg.topology,
                      DeriveSeed(seed, kTopologyStream)));
      FG_ASSIGN_OR_RETURN(PrunedTopology pruned,
                          PostPrune(fair.weights, cfg.r_p));
      edges = pruned.kept;
      out.edge_weights = std::move(fair.weights);
      out.pruned = std::move(pruned);
      absl::StrAppendFormat(&timings, " fair_mp=%.2fs", Seconds(t));
    }
  }

  auto t = std::chrono::steady_clock::now();
  FG_ASSIGN_OR_RETURN(AttributedGraph with_features,
                      graph.WithFeatures(features, names));
  FG_ASSIGN_OR_RETURN(AttributedGraph input, with_features.WithEdges(edges));
  FG_ASSIGN_OR_RETURN(
      TrainedClassifier clf,
      TrainClassifier(input, split, cfg.classifier,
                      DeriveSeed(seed, kClassifierStream)));
  FG_ASSIGN_OR_RETURN(out.metrics,
                      EvaluateClassifier(clf, input, split, seed));
  absl::StrAppendFormat(&timings, " classifier=%.2fs", Seconds(t));
  out.model = std::move(clf.params);
  out.debiased_features = input.features();
  out.classifier_edges = input.edges();
  std::fprintf(stderr, "[%s] seed %llu:%s total=%.2fs\n",
               VariantName(cfg, variant).c_str(),
               static_cast<unsigned long long>(seed), timings.c_str(),
               Seconds(start));
  return absl::OkStatus();
}

}  // namespace

SeedOutcome RunSeed(const RunConfig& cfg, Variant variant,
                    const AttributedGraph& graph, uint64_t seed) {
  SeedOutcome out;
  out.seed = seed;
  out.status = RunSeedImpl(cfg, variant, graph, seed, out);
  if (!out.status.ok()) {
    std::fprintf(stderr, "[%s] seed %llu failed: %s\n",
                 VariantName(cfg, variant).c_str(),
                 static_cast<unsigned long long>(seed),
                 out.status.ToString().c_str());
  }
  return out;
}

std::vector<SeedOutcome> RunBattery(const RunConfig& cfg, Variant variant) {
  std::vector<SeedOutcome> outcomes(cfg.seeds.size());
  // CSV data is identical for every seed, so it is loaded once.
  std::optional<absl::StatusOr<AttributedGraph>> shared;
  if (cfg.csv.has_value()) shared = LoadDataset(cfg, 0);
  ParallelFor(static_cast<int>(cfg.seeds.size()), cfg.jobs, [&](int i) {
    const uint64_t seed = cfg.seeds[i];
    absl::StatusOr<AttributedGraph> graph =
        shared.has_value() ? *shared : LoadDataset(cfg, seed);
    if (!graph.ok()) {
      outcomes[i].seed = seed;
      outcomes[i].status = graph.status();
      return;
    }
    outcomes[i] = RunSeed(cfg, variant, *graph, seed);
  });
  return outcomes;
}

std::string MetricsCsv(const RunConfig& cfg, Variant variant,
                       const std::vector<SeedOutcome>& outcomes) {
  const int k = NumSensitive(outcomes);
  const std::string arch(ClassifierArchName(cfg.classifier.arch));
  const std::string variant_name = VariantName(cfg, variant);
  std::string out = "seed,arch,variant";
  MetricsReport header;
  header.delta_sp.resize(k);
  header.delta_eo.resize(k);
  for (const auto& c : MetricColumns(header, k)) absl::StrAppend(&out, ",", c.first);
  out += "\n";
  for (const SeedOutcome& o : outcomes) {
    if (!o.status.ok()) continue;
    absl::StrAppend(&out, o.seed, ",", arch, ",", variant_name);
    for (const auto& c : MetricColumns(o.metrics, k)) {
      absl::StrAppend(&out, ",", Optional(c.second));
    }
    out += "\n";
  }
  absl::StrAppend(&out, "mean,", arch, ",", variant_name);
  for (const auto& [name, summary] : Summaries(outcomes, k)) {
    absl::StrAppend(&out, ",",
                    summary.n > 0 ? Number(summary.mean) : "undefined");
  }
  out += "\n";
  return out;
}

std::string AggregateCsv(const std::vector<SeedOutcome>& outcomes,
                         int num_sensitive) {
  std::string out = "metric,mean,std,n\n";
  for (const auto& [name, s] : Summaries(outcomes, num_sensitive)) {
    absl::StrAppend(&out, name, ",", s.n > 0 ? Number(s.mean) : "undefined",
                    ",", s.n > 0 ? Number(s.std) : "undefined", ",", s.n,
                    "\n");
  }
  return out;
}

absl::StatusOr<int> RunAndWrite(const RunConfig& cfg, Variant variant,
                                const std::string& out_dir) {
  FG_RETURN_IF_ERROR(cfg.Validate());
  FG_RETURN_IF_ERROR(EnsureDirectory(out_dir));
  const std::vector<SeedOutcome> outcomes = RunBattery(cfg, variant);
  const int k = NumSensitive(outcomes);

  OrderedJson manifest = ManifestBase(cfg, VariantName(cfg, variant));
  OrderedJson seeds = OrderedJson::array();
  OrderedJson skipped = OrderedJson::array();
  if (variant == Variant::kVanilla) {
    skipped = {"premask", "reconstruct", "fair_mp", "post_prune"};
  } else {
    const PipelineWiring w = WiringFor(cfg.ablation);
    if (!w.premask) skipped.push_back("premask");
    if (!w.reconstruct) skipped.push_back("reconstruct");
    if (!w.topology) {
      skipped.push_back("fair_mp");
      skipped.push_back("post_prune");
    }
  }
  manifest["skipped_stages"] = std::move(skipped);

  int failures = 0;
  for (const SeedOutcome& o : outcomes) {
    OrderedJson entry;
    entry["seed"] = o.seed;
    if (!o.status.ok()) {
      ++failures;
      entry["status"] = "failed";
      entry["reason"] = o.status.ToString();
      seeds.push_back(std::move(entry));
      continue;
    }
    entry["status"] = "ok";
    const std::string dir = JoinPath(out_dir, absl::StrCat("seed_", o.seed));
    FG_RETURN_IF_ERROR(EnsureDirectory(dir));
    if (o.mask.has_value()) {
      FG_RETURN_IF_ERROR(WriteFileAtomically(JoinPath(dir, "mask_report.json"),
                                             o.mask->ToJson(o.feature_names)));
      entry["masked_features"] = o.mask->set_uni.size();
    }
    if (o.pruned.has_value()) {
      absl::StatusOr<AttributedGraph> graph = LoadDataset(cfg, o.seed);
      if (graph.ok()) {
        FG_RETURN_IF_ERROR(WriteFileAtomically(
            JoinPath(dir, "pruned_edges.csv"),
            PrunedTopologyCsv(*graph, *o.edge_weights, *o.pruned)));
      }
      entry["edges_kept"] = o.pruned->kept.size();
      entry["edges_removed"] = o.pruned->removed.size();
    }
    if (o.model.has_value()) {
      FG_RETURN_IF_ERROR(WriteFileAtomically(JoinPath(dir, "model.json"),
                                             ClassifierToJson(*o.model)));
    }
    seeds.push_back(std::move(entry));
  }
  manifest["seeds"] = std::move(seeds);

  FG_RETURN_IF_ERROR(WriteFileAtomically(JoinPath(out_dir, "metrics.csv"),
                                         MetricsCsv(cfg, variant, outcomes)));
  FG_RETURN_IF_ERROR(WriteFileAtomically(JoinPath(out_dir, "aggregate.csv"),
                                         AggregateCsv(outcomes, k)));
  FG_RETURN_IF_ERROR(WriteFileAtomically(JoinPath(out_dir, "manifest.json"),
                                         manifest.dump(2) + "\n"));
  return failures == 0 ? kExitOk : kExitPartial;
}

absl::StatusOr<int> RunParamSweep(const RunConfig& cfg,
                                  const std::string& param,
                                  const std::vector<double>& values,
                                  const std::string& out_dir) {
  FG_RETURN_IF_ERROR(cfg.Validate());
  if (values.empty()) {
    return absl::InvalidArgumentError("sweep: empty value list");
  }
  if (param != "lambda2" && param != "lambda3" && param != "lambda4") {
    return absl::InvalidArgumentError(absl::StrCat(
        "sweep: unknown parameter '", param,
        "' (expected lambda2, lambda3 or lambda4)"));
  }
  FG_RETURN_IF_ERROR(EnsureDirectory(out_dir));
  std::string csv = "param,value,metric,mean,std,n\n";
  OrderedJson manifest = ManifestBase(cfg, "sweep");
  manifest["param"] = param;
  OrderedJson points = OrderedJson::array();
  int failures = 0;
  for (double value : values) {
    RunConfig point = cfg;
    if (param == "lambda2") point.feature.lambda2 = value;
    if (param == "lambda3") point.feature.lambda3 = value;
    if (param == "lambda4") point.topology.lambda4 = value;
    const std::vector<SeedOutcome> outcomes =
        RunBattery(point, Variant::kMapping);
    OrderedJson entry;
    entry["value"] = value;
    OrderedJson failed = OrderedJson::array();
    for (const SeedOutcome& o : outcomes) {
      if (!o.status.ok()) {
        ++failures;
        failed.push_back({{"seed", o.seed}, {"reason", o.status.ToString()}});
      }
    }
    entry["failed_seeds"] = std::move(failed);
    points.push_back(std::move(entry));
    for (const auto& [metric, s] :
         Summaries(outcomes, NumSensitive(outcomes))) {
      absl::StrAppend(&csv, param, ",", Number(value), ",", metric, ",",
                      s.n > 0 ? Number(s.mean) : "undefined", ",",
                      s.n > 0 ? Number(s.std) : "undefined", ",", s.n, "\n");
    }
  }
  manifest["points"] = std::move(points);
  FG_RETURN_IF_ERROR(
      WriteFileAtomically(JoinPath(out_dir, "sweep.csv"), csv));
  FG_RETURN_IF_ERROR(WriteFileAtomically(JoinPath(out_dir, "manifest.json"),
                                         manifest.dump(2) + "\n"));
  return failures == 0 ? kExitOk : kExitPartial;
}

absl::StatusOr<int> RunAttackSweep(const RunConfig& cfg,
                                   const std::string& out_dir) {
  FG_RETURN_IF_ERROR(cfg.Validate());
  FG_RETURN_IF_ERROR(EnsureDirectory(out_dir));
  auto make_scenario = [&](const AttributedGraph& g,
                           const Eigen::MatrixXd& features,
                           const std::vector<Edge>& edges) {
    AttackScenario s;
    s.features = features;
    s.edges = edges;
    s.labels = g.labels();
    s.sensitive = g.sensitive();
    s.epochs = cfg.attack_epochs;
    s.lr = cfg.attack_lr;
    s.hidden = cfg.attack_hidden;
    return s;
  };
  const uint64_t data_seed = cfg.synth.has_value() && !cfg.synth->regenerate_per_seed
                                 ? cfg.synth->seed
                                 : cfg.seeds.front();
  std::vector<AttackInput> inputs;
  if (cfg.synth.has_value()) {
    for (ScenarioCase c : kAllScenarios) {
      FG_ASSIGN_OR_RETURN(AttributedGraph g,
                          AssembleCase(c, cfg.synth->spec, data_seed));
      inputs.push_back({std::string(ScenarioName(c)),
                        make_scenario(g, g.features(), g.edges())});
    }
  } else {
    FG_ASSIGN_OR_RETURN(AttributedGraph g, LoadDataset(cfg, data_seed));
    inputs.push_back({"original", make_scenario(g, g.features(), g.edges())});
    SeedOutcome debiased = RunSeed(cfg, Variant::kMapping, g, data_seed);
    FG_RETURN_IF_ERROR(debiased.status);
    inputs.push_back({"mapping", make_scenario(g, debiased.debiased_features,
                                               debiased.classifier_edges)});
  }
  FG_ASSIGN_OR_RETURN(
      std::vector<LeakageRow> rows,
      LeakageSweep(inputs, cfg.attack_fractions, cfg.seeds, cfg.jobs));
  OrderedJson manifest = ManifestBase(cfg, "attack");
  manifest["data_seed"] = data_seed;
  OrderedJson pairs = OrderedJson::array();
  for (const AttackInput& in : inputs) pairs.push_back(in.name);
  manifest["pairs"] = std::move(pairs);
  FG_RETURN_IF_ERROR(
      WriteFileAtomically(JoinPath(out_dir, "leakage.csv"), LeakageCsv(rows)));
  FG_RETURN_IF_ERROR(WriteFileAtomically(JoinPath(out_dir, "manifest.json"),
                                         manifest.dump(2) + "\n"));
  return kExitOk;
}

absl::StatusOr<int> RunSynth(const RunConfig& cfg, const std::string& out_dir) {
  FG_RETURN_IF_ERROR(cfg.Validate());
  if (!cfg.synth.has_value()) {
    return absl::InvalidArgumentError("synth: config has no dataset.synth");
  }
  const uint64_t seed =
      cfg.synth->regenerate_per_seed ? cfg.seeds.front() : cfg.synth->seed;
  FG_ASSIGN_OR_RETURN(AttributedGraph g, LoadDataset(cfg, seed));
  FG_RETURN_IF_ERROR(EnsureDirectory(out_dir));
  FG_RETURN_IF_ERROR(SaveGraph(g, out_dir));
  OrderedJson manifest = ManifestBase(cfg, "synth");
  manifest["data_seed"] = seed;
  manifest["sensitive_columns"] = g.sensitive_names();
  manifest["num_nodes"] = g.num_nodes();
  manifest["num_edges"] = g.edges().size();
  FG_RETURN_IF_ERROR(WriteFileAtomically(JoinPath(out_dir, "manifest.json"),
                                         manifest.dump(2) + "\n"));
  return kExitOk;
}

}  // namespace fairgraph
