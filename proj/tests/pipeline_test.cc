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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"

namespace fairgraph {
namespace {

namespace fs = std::filesystem;

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int CountLines(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

// A small CSV dataset on disk plus a fast config pointing at it.
class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::MakeTempDir("pipeline");
    std::mt19937_64 rng(11);
    auto g = testing::RandomGraph(40, 5, 2, 0.15, rng);
    ASSERT_TRUE(g.ok()) << g.status();
    ASSERT_OK(SaveGraph(*g, dir_));
    graph_.emplace(std::move(g).value());
  }

  std::string ConfigJson(const std::string& extra = "") const {
    std::string json = R"({"dataset": {"csv": {"features": ")" + dir_ +
                       R"(/features.csv", "edges": ")" + dir_ +
                       R"(/edges.csv", "labels": ")" + dir_ +
                       R"(/labels.csv", "sensitive_columns": ["s0", "s1"]}},
      "feature_epochs": 20, "topology_epochs": 20, "r": 0.4, "r_s": 0.5,
      "classifier": {"epochs": 20, "hidden": 4},
      "attack": {"epochs": 5}, "seeds": [0, 1, 2])";
    if (!extra.empty()) json += ", " + extra;
    return json + "}";
  }

  RunConfig Config(const std::string& extra = "") const {
    auto cfg = ParseRunConfig(ConfigJson(extra));
    EXPECT_TRUE(cfg.ok()) << cfg.status();
    return cfg.ok() ? *cfg : RunConfig();
  }

  std::string dir_;
  std::optional<AttributedGraph> graph_;
};

TEST_F(PipelineTest, UnknownKeysAreErrors) {
  auto cfg = ParseRunConfig(ConfigJson(R"("lamda4": 1)"));
  ASSERT_FALSE(cfg.ok());
  EXPECT_NE(cfg.status().message().find("lamda4"), std::string::npos);
  cfg = ParseRunConfig(ConfigJson(R"("classifier": {"arch": "gcn", "depth": 2})"));
  EXPECT_FALSE(cfg.ok());
  EXPECT_FALSE(ParseRunConfig("{not json").ok());
}

TEST_F(PipelineTest, MissingDatasetFileIsAnError) {
  RunConfig cfg = Config();
  EXPECT_OK(cfg.Validate());
  cfg.csv->edges = dir_ + "/missing.csv";
  const absl::Status status = cfg.Validate();
  ASSERT_FALSE(status.ok());
  EXPECT_NE(status.message().find("missing.csv"), std::string::npos);
  EXPECT_FALSE(RunAndWrite(cfg, Variant::kVanilla, dir_ + "/out").ok());
}

TEST_F(PipelineTest, PresetFillsDefaultsAndExplicitKeysWin) {
  RunConfig cfg = Config(R"("preset": "recidivism", "lambda4": 7)");
  EXPECT_EQ(cfg.feature.lambda2, 5e4);
  EXPECT_EQ(cfg.feature.lambda3, 100.0);
  EXPECT_EQ(cfg.topology.lambda4, 7.0);
  EXPECT_EQ(cfg.r_p, 0.72);
  EXPECT_FALSE(ParseRunConfig(ConfigJson(R"("preset": "pokec")")).ok());
}

TEST_F(PipelineTest, ConfigJsonRoundTrips) {
  const RunConfig cfg = Config(R"("ablation": "w/o-to", "jobs": 2)");
  const std::string json = RunConfigToJson(cfg);
  auto again = ParseRunConfig(json);
  ASSERT_TRUE(again.ok()) << again.status();
  EXPECT_EQ(RunConfigToJson(*again), json);
  EXPECT_EQ(again->ablation, Ablation::kWithoutTopology);
  EXPECT_EQ(again->jobs, 2);
}

TEST_F(PipelineTest, RunsAreByteReproducibleAcrossWorkerCounts) {
  const RunConfig cfg = Config(R"("jobs": 2)");
  RunConfig serial = cfg;
  serial.jobs = 1;
  ASSERT_OK_AND_ASSIGN(int code1,
                       RunAndWrite(cfg, Variant::kMapping, dir_ + "/a"));
  ASSERT_OK_AND_ASSIGN(int code2,
                       RunAndWrite(cfg, Variant::kMapping, dir_ + "/b"));
  ASSERT_OK_AND_ASSIGN(int code3,
                       RunAndWrite(serial, Variant::kMapping, dir_ + "/c"));
  EXPECT_EQ(code1, kExitOk);
  EXPECT_EQ(code2, kExitOk);
  EXPECT_EQ(code3, kExitOk);
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir_ + "/a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dir_ + "/a");
    const std::string a = ReadAll(entry.path());
    EXPECT_EQ(a, ReadAll(fs::path(dir_ + "/b") / rel)) << rel;
    // The manifest records the worker count itself.
    if (rel != "manifest.json") {
      EXPECT_EQ(a, ReadAll(fs::path(dir_ + "/c") / rel)) << rel;
    }
    ++compared;
  }
  // Three top-level files plus mask, pruned edges and model per seed.
  EXPECT_EQ(compared, 3 + 3 * 3);
  EXPECT_EQ(CountLines(ReadAll(dir_ + "/a/metrics.csv")), 1 + 3 + 1);
}

TEST_F(PipelineTest, WithoutTopologyKeepsEdgesAndSkipsPruning) {
  const RunConfig cfg = Config(R"("ablation": "w/o-to", "seeds": [4])");
  ASSERT_OK_AND_ASSIGN(int code,
                       RunAndWrite(cfg, Variant::kMapping, dir_ + "/wo"));
  EXPECT_EQ(code, kExitOk);
  EXPECT_FALSE(fs::exists(dir_ + "/wo/seed_4/pruned_edges.csv"));
  EXPECT_TRUE(fs::exists(dir_ + "/wo/seed_4/mask_report.json"));
  const std::string manifest = ReadAll(dir_ + "/wo/manifest.json");
  EXPECT_NE(manifest.find("\"post_prune\""), std::string::npos);
  EXPECT_NE(manifest.find("\"w/o-to\""), std::string::npos);

  const SeedOutcome o = RunSeed(cfg, Variant::kMapping, *graph_, 4);
  ASSERT_OK(o.status);
  EXPECT_EQ(o.classifier_edges, graph_->edges());
  EXPECT_FALSE(o.pruned.has_value());
}

TEST_F(PipelineTest, WithoutFeatureStageUsesOriginalFeatures) {
  const RunConfig cfg = Config(R"("ablation": "w/o-fe")");
  const SeedOutcome o = RunSeed(cfg, Variant::kMapping, *graph_, 0);
  ASSERT_OK(o.status);
  EXPECT_EQ(o.debiased_features, graph_->features());
  EXPECT_FALSE(o.mask.has_value());
  ASSERT_TRUE(o.pruned.has_value());
  EXPECT_EQ(o.classifier_edges, o.pruned->kept);
}

TEST_F(PipelineTest, VanillaUsesTheInputGraph) {
  const SeedOutcome o = RunSeed(Config(), Variant::kVanilla, *graph_, 0);
  ASSERT_OK(o.status);
  EXPECT_EQ(o.debiased_features, graph_->features());
  EXPECT_EQ(o.classifier_edges, graph_->edges());
  EXPECT_EQ(VariantName(Config(), Variant::kVanilla), "vanilla");
  EXPECT_EQ(VariantName(Config(), Variant::kMapping), "mapping");
}

TEST_F(PipelineTest, WithoutReconstructionUsesMaskedFeatures) {
  const RunConfig cfg = Config(R"("ablation": "w/o-re")");
  const SeedOutcome o = RunSeed(cfg, Variant::kMapping, *graph_, 0);
  ASSERT_OK(o.status);
  ASSERT_TRUE(o.mask.has_value());
  EXPECT_EQ(o.debiased_features.cols(),
            graph_->num_features() - static_cast<int>(o.mask->set_uni.size()));
  int out = 0;
  for (int j = 0; j < graph_->num_features(); ++j) {
    if (std::find(o.mask->set_uni.begin(), o.mask->set_uni.end(), j) !=
        o.mask->set_uni.end()) {
      continue;
    }
    EXPECT_EQ(o.debiased_features.col(out++), graph_->features().col(j));
  }
}

TEST_F(PipelineTest, SweepWritesOneBlockPerValue) {
  RunConfig cfg = Config(R"("seeds": [0])");
  const std::string out = dir_ + "/sweep";
  ASSERT_OK_AND_ASSIGN(int code,
                       RunParamSweep(cfg, "lambda4", kDefaultSweepValues, out));
  EXPECT_EQ(code, kExitOk);
  const std::string csv = ReadAll(out + "/sweep.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "param,value,metric,mean,std,n");
  int acc_rows = 0;
  while (std::getline(lines, line)) {
    if (line.find(",acc,") != std::string::npos) ++acc_rows;
  }
  EXPECT_EQ(acc_rows, 7);
  EXPECT_FALSE(RunParamSweep(cfg, "lambda4", {}, out).ok());
  EXPECT_FALSE(RunParamSweep(cfg, "lambda9", {1.0}, out).ok());
}

TEST_F(PipelineTest, FailedSeedsAreReportedAsPartial) {
  // A single label class cannot be trained on, so every seed fails.
  const std::string single = dir_ + "/single";
  std::vector<int> labels(graph_->num_nodes(), 1);
  ASSERT_OK_AND_ASSIGN(
      AttributedGraph g,
      AttributedGraph::Create(graph_->num_nodes(), graph_->edges(),
                              graph_->features(), graph_->sensitive(), labels,
                              graph_->feature_names(),
                              graph_->sensitive_names()));
  ASSERT_OK(SaveGraph(g, single));
  RunConfig cfg = Config(R"("seeds": [0, 1])");
  cfg.csv->features = single + "/features.csv";
  cfg.csv->edges = single + "/edges.csv";
  cfg.csv->labels = single + "/labels.csv";
  ASSERT_OK_AND_ASSIGN(int code,
                       RunAndWrite(cfg, Variant::kVanilla, dir_ + "/fail"));
  EXPECT_EQ(code, kExitPartial);
  EXPECT_NE(ReadAll(dir_ + "/fail/manifest.json").find("\"failed\""),
            std::string::npos);
  EXPECT_EQ(CountLines(ReadAll(dir_ + "/fail/metrics.csv")), 2);
}

TEST(PipelineSynthTest, SynthConfigParsesScenario) {
  auto cfg = ParseRunConfig(
      R"({"dataset": {"synth": {"scenario": "DFBT", "label_bias": 0.1}}})");
  ASSERT_TRUE(cfg.ok()) << cfg.status();
  ASSERT_TRUE(cfg->synth.has_value());
  EXPECT_EQ(cfg->synth->scenario, ScenarioCase::kDFBT);
  EXPECT_EQ(cfg->synth->spec.label_bias, 0.1);
  EXPECT_FALSE(ParseRunConfig(
                   R"({"dataset": {"synth": {"scenario": "XXXX"}}})")
                   .ok());
  EXPECT_FALSE(ParseRunConfig(R"({"preset": "german"})").ok());
}

}  // namespace
}  // namespace fairgraph
