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
#include <random>

#include <gtest/gtest.h>

#include "fairgraph/dcov.h"
#include "fairgraph/synth.h"
#include "test_util.h"

namespace fairgraph {
namespace {

using ::fairgraph::testing::RandomBinary;
using ::fairgraph::testing::RandomMatrix;

PremaskScores Scores(std::vector<double> s, std::vector<double> y) {
  PremaskScores scores;
  scores.sensitive = Eigen::Map<Eigen::VectorXd>(s.data(), s.size());
  scores.label = Eigen::Map<Eigen::VectorXd>(y.data(), y.size());
  return scores;
}

bool IsSubset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

TEST(PremaskScoresTest, Examples) {
  std::mt19937_64 rng(1);
  const int n = 500;
  const Eigen::MatrixXd s = RandomBinary(n, 1, rng);
  Eigen::MatrixXd x(n, 3);
  x.col(0) = s.col(0);
  x.col(1) = RandomMatrix(n, 1, rng);
  x.col(2).setConstant(4.0);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i % 2;
  auto g = AttributedGraph::Create(n, {}, x, s, labels, {"a", "b", "c"}, {"s"});
  ASSERT_TRUE(g.ok());
  auto scores = ComputePremaskScores(*g);
  ASSERT_TRUE(scores.ok());
  EXPECT_NEAR(scores->sensitive(0), 1.0, 1e-12);
  EXPECT_LT(scores->sensitive(1), 0.05);
  EXPECT_EQ(scores->sensitive(2), 0.0);
  EXPECT_EQ(scores->label(2), 0.0);
}

TEST(PremaskScoresTest, UsesAllSensitiveColumnsJointly) {
  std::mt19937_64 rng(2);
  const int n = 200;
  const Eigen::MatrixXd s = RandomBinary(n, 2, rng);
  Eigen::MatrixXd x = RandomMatrix(n, 2, rng);
  x.col(0) = s.col(1);
  std::vector<int> labels(n, 0);
  labels[0] = 1;
  auto g = AttributedGraph::Create(n, {}, x, s, labels, {"a", "b"}, {"s0", "s1"});
  ASSERT_TRUE(g.ok());
  auto scores = ComputePremaskScores(*g);
  ASSERT_TRUE(scores.ok());
  auto joint = Dcor2(x.col(0), s);
  ASSERT_TRUE(joint.ok());
  EXPECT_NEAR(scores->sensitive(0), *joint, 1e-12);
}

TEST(PremaskSelectTest, HandDerivedSets) {
  auto report = PremaskSelect(
      Scores({0.9, 0.2, 0.6, 0.1, 0.5}, {0.1, 0.8, 0.2, 0.9, 0.7}), 0.4, 0.8);
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_EQ(report->x, 2);
  EXPECT_EQ(report->set_top, (std::vector<int>{0, 2}));
  EXPECT_EQ(report->set_les, (std::vector<int>{0, 2}));
  EXPECT_EQ(report->set_int, (std::vector<int>{0, 2}));
  EXPECT_EQ(report->set_sen, (std::vector<int>{0}));
  EXPECT_EQ(report->set_uni, (std::vector<int>{0, 2}));
}

TEST(PremaskSelectTest, HighThresholdLeavesOnlyIntersection) {
  auto report = PremaskSelect(
      Scores({0.9, 0.2, 0.6, 0.1, 0.5}, {0.1, 0.8, 0.2, 0.9, 0.7}), 0.4, 0.95);
  ASSERT_TRUE(report.ok());
  EXPECT_TRUE(report->set_sen.empty());
  EXPECT_EQ(report->set_uni, report->set_int);
}

TEST(PremaskSelectTest, TiesBreakTowardLowerIndex) {
  auto report = PremaskSelect(Scores({0.5, 0.5, 0.5, 0.5, 0.5},
                                     {0.3, 0.3, 0.3, 0.3, 0.3}),
                              0.4, 0.9);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report->set_top, (std::vector<int>{0, 1}));
  EXPECT_EQ(report->set_les, (std::vector<int>{0, 1}));
}

TEST(PremaskSelectTest, ThresholdIsInclusiveAndRatioFloors) {
  auto report = PremaskSelect(Scores({0.7, 0.69}, {0.5, 0.5}), 0.3, 0.7);
  ASSERT_TRUE(report.ok());
  EXPECT_EQ(report->x, 0);
  EXPECT_TRUE(report->set_top.empty());
  EXPECT_EQ(report->set_sen, (std::vector<int>{0}));
  // 0.3 * 10 must floor to 3, not 2.
  auto ten = PremaskSelect(Scores(std::vector<double>(10, 0.1),
                                  std::vector<double>(10, 0.1)),
                           0.3, 0.7);
  ASSERT_TRUE(ten.ok());
  EXPECT_EQ(ten->x, 3);
}

TEST(PremaskSelectTest, RejectsOutOfRangeRatios) {
  const PremaskScores s = Scores({0.5}, {0.5});
  EXPECT_FALSE(PremaskSelect(s, 0.2, 0.0).ok());
  EXPECT_FALSE(PremaskSelect(s, 0.2, 1.0).ok());
  EXPECT_FALSE(PremaskSelect(s, 0.0, 0.7).ok());
  EXPECT_FALSE(PremaskSelect(s, 1.5, 0.7).ok());
}

TEST(PremaskSelectTest, MonotoneInThresholds) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> d_dist(1, 30);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = d_dist(rng);
    std::vector<double> s(d), y(d);
    for (int i = 0; i < d; ++i) {
      // Coarse grid values create ties on purpose.
      s[i] = std::round(u(rng) * 10) / 10;
      y[i] = std::round(u(rng) * 10) / 10;
    }
    const PremaskScores scores = Scores(s, y);
    const double r_lo = 0.05 + 0.45 * u(rng), r_hi = r_lo + 0.45 * u(rng);
    const double t_lo = 0.05 + 0.45 * u(rng), t_hi = t_lo + 0.45 * u(rng);
    auto a = PremaskSelect(scores, r_lo, t_lo);
    auto b = PremaskSelect(scores, r_hi, t_hi);
    ASSERT_TRUE(a.ok() && b.ok());
    EXPECT_TRUE(IsSubset(b->set_sen, a->set_sen));
    EXPECT_TRUE(IsSubset(a->set_top, b->set_top));
    EXPECT_TRUE(IsSubset(a->set_les, b->set_les));
    EXPECT_EQ(static_cast<int>(a->set_top.size()), a->x);
    for (int i : a->set_sen) EXPECT_GE(s[i], t_lo);
  }
}

TEST(ApplyMaskTest, Examples) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd x = RandomMatrix(6, 5, rng);
  const std::vector<std::string> names = {"f0", "f1", "f2", "f3", "f4"};
  MaskReport report;
  report.set_uni = {0, 2};
  auto masked = ApplyMask(x, names, report);
  ASSERT_TRUE(masked.ok());
  EXPECT_EQ(masked->features.cols(), 3);
  EXPECT_EQ(masked->names, (std::vector<std::string>{"f1", "f3", "f4"}));
  EXPECT_EQ(masked->kept_columns, (std::vector<int>{1, 3, 4}));
  EXPECT_EQ(masked->features.col(1), x.col(3));

  report.set_uni = {};
  masked = ApplyMask(x, names, report);
  ASSERT_TRUE(masked.ok());
  EXPECT_EQ(masked->features, x);

  report.set_uni = {0, 1, 2, 3, 4};
  EXPECT_FALSE(ApplyMask(x, names, report).ok());
  report.set_uni = {7};
  EXPECT_FALSE(ApplyMask(x, names, report).ok());
}

TEST(ApplyMaskTest, RerunningOnOwnOutputSelectsNothingSensitive) {
  for (uint64_t seed = 0; seed < 3; ++seed) {
    auto g = AssembleCase(ScenarioCase::kBFDT, SynthSpec(), seed);
    ASSERT_TRUE(g.ok());
    auto scores = ComputePremaskScores(*g);
    ASSERT_TRUE(scores.ok());
    auto report = PremaskSelect(*scores, 0.2, 0.7);
    ASSERT_TRUE(report.ok());
    auto masked = ApplyMask(g->features(), g->feature_names(), *report);
    ASSERT_TRUE(masked.ok());
    auto g2 = g->WithFeatures(masked->features, masked->names);
    ASSERT_TRUE(g2.ok());
    auto scores2 = ComputePremaskScores(*g2);
    ASSERT_TRUE(scores2.ok());
    for (size_t c = 0; c < masked->kept_columns.size(); ++c) {
      EXPECT_EQ(scores2->sensitive(c),
                scores->sensitive(masked->kept_columns[c]));
    }
    auto report2 = PremaskSelect(*scores2, 0.2, 0.7);
    ASSERT_TRUE(report2.ok());
    EXPECT_TRUE(report2->set_sen.empty());
  }
}

TEST(MaskReportTest, JsonListsSetsAndScores) {
  auto report = PremaskSelect(Scores({0.9, 0.1}, {0.2, 0.4}), 0.5, 0.8);
  ASSERT_TRUE(report.ok());
  const std::string json = report->ToJson({"a", "b"});
  EXPECT_NE(json.find("\"set_uni\""), std::string::npos);
  EXPECT_NE(json.find("\"dcor2_sensitive\""), std::string::npos);
  EXPECT_NE(json.find("\"a\""), std::string::npos);
}

struct SmallBiased {
  Eigen::MatrixXd x, s;
};

SmallBiased MakeSmallBiased(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = 120;
  SmallBiased d;
  d.s = RandomBinary(n, 2, rng);
  d.x = RandomMatrix(n, 3, rng);
  d.x.col(0) += 3.0 * d.s.col(0);
  d.x.col(1) -= 2.0 * d.s.col(1);
  return d;
}

TEST(ReconstructTest, NoPenaltiesKeepsAllOnesFixedPoint) {
  const SmallBiased d = MakeSmallBiased(1);
  ReconstructOptions opt;
  opt.lambda1 = opt.lambda2 = opt.lambda3 = 0.0;
  opt.weight_decay = 0.0;
  opt.epochs = 50;
  auto rec = FeatureReconstructor::Create(d.x, d.s, opt, 1);
  ASSERT_TRUE(rec.ok());
  auto result = std::move(*rec).Run();
  ASSERT_TRUE(result.ok());
  EXPECT_TRUE(result->weights.isApprox(Eigen::VectorXd::Ones(3)));
  EXPECT_LE(result->trajectory.back().reconstruction,
            result->trajectory.front().reconstruction);
  EXPECT_EQ(result->trajectory.size(), 50u);
}

TEST(ReconstructTest, HugeSparsityZeroesWeightsAfterOneStep) {
  const SmallBiased d = MakeSmallBiased(2);
  ReconstructOptions opt;
  opt.lambda1 = 1e6;
  auto rec = FeatureReconstructor::Create(d.x, d.s, opt, 2);
  ASSERT_TRUE(rec.ok());
  ASSERT_OK(rec->AdversaryStep());
  ASSERT_TRUE(rec->MainStep().ok());
  EXPECT_TRUE(rec->weights().isZero(0.0));
}

TEST(ReconstructTest, StepsTouchOnlyTheirOwnParameters) {
  const SmallBiased d = MakeSmallBiased(3);
  auto rec = FeatureReconstructor::Create(d.x, d.s, ReconstructOptions(), 3);
  ASSERT_TRUE(rec.ok());
  for (int epoch = 0; epoch < 5; ++epoch) {
    const Eigen::VectorXd w = rec->weights();
    const nn::ModelParams adv = rec->adversary();
    ASSERT_OK(rec->AdversaryStep());
    EXPECT_EQ(rec->weights(), w);
    EXPECT_FALSE(rec->adversary() == adv);

    const nn::ModelParams adv_after = rec->adversary();
    const Eigen::VectorXd w_before = rec->weights();
    ASSERT_TRUE(rec->MainStep().ok());
    EXPECT_TRUE(rec->adversary() == adv_after);
    EXPECT_NE(rec->weights(), w_before);
  }
}

TEST(ReconstructTest, WithoutAdversaryFinalLossNoWorseThanInitial) {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const SmallBiased d = MakeSmallBiased(100 + seed);
    ReconstructOptions opt;
    opt.lambda3 = 0.0;
    opt.epochs = 200;
    auto rec = FeatureReconstructor::Create(d.x, d.s, opt, seed);
    ASSERT_TRUE(rec.ok());
    auto result = std::move(*rec).Run();
    ASSERT_TRUE(result.ok());
    EXPECT_LE(result->trajectory.back().total, result->trajectory.front().total)
        << "seed " << seed;
  }
}

TEST(ReconstructTest, RejectsBadInputs) {
  const SmallBiased d = MakeSmallBiased(4);
  EXPECT_FALSE(FeatureReconstructor::Create(Eigen::MatrixXd(120, 0), d.s,
                                            ReconstructOptions(), 0)
                   .ok());
  EXPECT_FALSE(FeatureReconstructor::Create(d.x.topRows(10), d.s,
                                            ReconstructOptions(), 0)
                   .ok());
  ReconstructOptions bad;
  bad.lambda2 = -1;
  EXPECT_FALSE(FeatureReconstructor::Create(d.x, d.s, bad, 0).ok());
}

}  // namespace
}  // namespace fairgraph
