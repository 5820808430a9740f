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


// Acceptance battery: one PASS, FAIL or SKIP line per criterion. Exits
// nonzero when any criterion fails. Tolerances are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unistd.h>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "desk_config.h"
#include "fairgraph/attack.h"
#include "fairgraph/dcov.h"
#include "fairgraph/feature_debias.h"
#include "fairgraph/graph.h"
#include "fairgraph/pipeline.h"
#include "fairgraph/synth.h"
#include "fairgraph/topology_debias.h"
#include "gradient_suite.h"
#include "json.hpp"
#include "random_data.h"

namespace fairgraph {
namespace {

namespace fs = std::filesystem;

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict = Verdict::kPass;
  std::string detail;
};

// Accumulates failed checks; the first failure message is kept.
class Checker {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = what;
  }
  template <typename T>
  bool Ok(const absl::StatusOr<T>& v, const std::string& what) {
    if (v.ok()) return true;
    Expect(false, absl::StrCat(what, ": ", v.status().ToString()));
    return false;
  }
  bool Ok(const absl::Status& s, const std::string& what) {
    Expect(s.ok(), absl::StrCat(what, ": ", s.ToString()));
    return s.ok();
  }
  Outcome Finish(const std::string& summary) const {
    if (failures_ == 0) return {Verdict::kPass, summary};
    return {Verdict::kFail, absl::StrCat(summary, "; ", failures_,
                                         " failed check(s), first: ", first_)};
  }

 private:
  int failures_ = 0;
  std::string first_;
};

double Elapsed(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

// ---- Statistics ------------------------------------------------------------

// Direct O(n^2) evaluation of the squared distance covariance.
double NaiveDcov2(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd a(n, n), b(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      a(k, l) = std::abs(x(k) - x(l));
      b(k, l) = std::abs(y(k) - y(l));
    }
  }
  auto center = [n](Eigen::MatrixXd& m) {
    const Eigen::VectorXd row = m.rowwise().mean();
    const Eigen::RowVectorXd col = m.colwise().mean();
    const double grand = m.mean();
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) m(k, l) += grand - row(k) - col(l);
    }
  };
  center(a);
  center(b);
  return (a.array() * b.array()).sum() / (static_cast<double>(n) * n);
}

Outcome StatisticsCorrectness() {
  const auto start = std::chrono::steady_clock::now();
  Checker check;
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<int> size(2, 512);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = trial == 0 ? 512 : size(rng);
    Eigen::VectorXd x = testing::RandomMatrix(n, 1, rng).col(0);
    Eigen::VectorXd y = testing::RandomMatrix(n, 1, rng).col(0);
    // Every fourth instance has heavy ties.
    if (trial % 4 == 0) x = x.array().round();
    const auto fast = Dcov2FastUnivariate(x, y);
    if (!check.Ok(fast, "fast dcov2")) continue;
    const double naive = NaiveDcov2(x, y);
    worst = std::max(worst, std::abs(*fast - naive) /
                                std::max(std::abs(naive), 1e-300));
  }
  check.Expect(worst <= 1e-10,
               absl::StrFormat("fast vs naive relative error %.3g", worst));

  int fuzz_failures = 0;
  std::uniform_int_distribution<int> small(2, 40), dims(1, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = small(rng);
    const Eigen::MatrixXd x = testing::RandomMatrix(n, dims(rng), rng);
    const Eigen::MatrixXd y = testing::RandomMatrix(n, dims(rng), rng);
    const auto r = Dcor2(x, y);
    const auto self = Dcor2(x, x);
    if (!r.ok() || !self.ok() || *r < 0.0 || *r > 1.0 ||
        std::abs(*self - 1.0) > 1e-12) {
      ++fuzz_failures;
    }
  }
  check.Expect(fuzz_failures == 0,
               absl::StrCat(fuzz_failures, " dcor2 fuzz instances failed"));

  Eigen::MatrixXd two(2, 1), three(3, 1);
  two << 0, 1;
  three << 0, 1, 2;
  const auto v2 = Dcov2(two, two);
  const auto v3 = Dcov2(three, three);
  if (check.Ok(v2, "dcov2 [0,1]")) {
    check.Expect(std::abs(*v2 - 0.25) <= 1e-12, "dcov2 [0,1] != 0.25");
  }
  if (check.Ok(v3, "dcov2 [0,1,2]")) {
    check.Expect(std::abs(*v3 - 40.0 / 81.0) <= 1e-12,
                 "dcov2 [0,1,2] != 40/81");
  }
  const double seconds = Elapsed(start);
  check.Expect(seconds < 10.0, absl::StrFormat("took %.1fs", seconds));
  return check.Finish(absl::StrFormat(
      "fast vs naive worst rel %.2g over 100, 1000 dcor2 fuzz, %.1fs", worst,
      seconds));
}

// ---- Gradients -------------------------------------------------------------

Outcome GradientSuite() {
  const auto start = std::chrono::steady_clock::now();
  Checker check;
  double worst = 0.0;
  std::string worst_case;
  const std::vector<testing::GradientSuiteResult> results =
      testing::RunGradientSuite(testing::kGradientInstances);
  for (const auto& r : results) {
    check.Expect(r.instances >= 20, r.name + " ran too few instances");
    check.Expect(r.worst <= testing::kGradientTolerance,
                 absl::StrFormat("%s relative error %.3g", r.name, r.worst));
    if (r.worst >= worst) {
      worst = r.worst;
      worst_case = r.name;
    }
  }
  const double seconds = Elapsed(start);
  check.Expect(seconds < 30.0, absl::StrFormat("took %.1fs", seconds));
  return check.Finish(absl::StrFormat(
      "%d cases x %d instances, worst %.2g (%s), %.1fs",
      static_cast<int>(results.size()), testing::kGradientInstances, worst,
      worst_case, seconds));
}

// ---- Masking set logic -----------------------------------------------------

PremaskScores Scores(const std::vector<double>& s, const std::vector<double>& y) {
  PremaskScores scores;
  scores.sensitive = Eigen::Map<const Eigen::VectorXd>(s.data(), s.size());
  scores.label = Eigen::Map<const Eigen::VectorXd>(y.data(), y.size());
  return scores;
}

bool IsSubset(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Outcome MaskingLogic() {
  Checker check;
  const auto report = PremaskSelect(
      Scores({0.9, 0.2, 0.6, 0.1, 0.5}, {0.1, 0.8, 0.2, 0.9, 0.7}), 0.4, 0.8);
  if (check.Ok(report, "hand example")) {
    const std::vector<int> both = {0, 2};
    check.Expect(report->x == 2, "x != 2");
    check.Expect(report->set_top == both, "set_top");
    check.Expect(report->set_les == both, "set_les");
    check.Expect(report->set_int == both, "set_int");
    check.Expect(report->set_sen == std::vector<int>{0}, "set_sen");
    check.Expect(report->set_uni == both, "set_uni");
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> d_dist(1, 30);
  int violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = d_dist(rng);
    std::vector<double> s(d), y(d);
    for (int i = 0; i < d; ++i) {
      s[i] = std::round(u(rng) * 10) / 10;
      y[i] = std::round(u(rng) * 10) / 10;
    }
    const PremaskScores scores = Scores(s, y);
    const double r_lo = 0.05 + 0.45 * u(rng), r_hi = r_lo + 0.45 * u(rng);
    const double t_lo = 0.05 + 0.45 * u(rng), t_hi = t_lo + 0.45 * u(rng);
    const auto a = PremaskSelect(scores, r_lo, t_lo);
    const auto b = PremaskSelect(scores, r_hi, t_hi);
    if (!a.ok() || !b.ok() || !IsSubset(b->set_sen, a->set_sen) ||
        !IsSubset(a->set_top, b->set_top) || !IsSubset(a->set_les, b->set_les) ||
        !IsSubset(a->set_int, b->set_int)) {
      ++violations;
    }
  }
  check.Expect(violations == 0,
               absl::StrCat(violations, " of 200 monotonicity trials"));
  return check.Finish("hand example exact, 200 monotonicity trials");
}

// ---- Synthetic data --------------------------------------------------------

int CountValue(const Eigen::VectorXd& v, double value) {
  return static_cast<int>((v.array() == value).count());
}

Outcome SyntheticFidelity() {
  const auto start = std::chrono::steady_clock::now();
  Checker check;
  const SynthSpec spec;
  const auto biased = GenBiasedFeatures(spec, 0);
  if (check.Ok(biased, "biased features")) {
    // Column 0 is the major attribute, column 1 the minor one.
    check.Expect(CountValue(biased->sensitive.col(0), 0.0) == 700 &&
                     CountValue(biased->sensitive.col(0), 1.0) == 1800,
                 "major group sizes");
    check.Expect(CountValue(biased->sensitive.col(1), 0.0) == 500 &&
                     CountValue(biased->sensitive.col(1), 1.0) == 2000,
                 "minor group sizes");
  }
  int intra = 0;
  const auto sbm = GenSbm(spec.sbm_sizes, spec.sbm_p_in, spec.sbm_p_out, 0);
  if (check.Ok(sbm, "sbm")) {
    for (const Edge& e : *sbm) intra += (e.u < 500 && e.v < 500) ? 1 : 0;
    const double expected = 623.7;
    check.Expect(std::abs(intra - expected) <= 4.0 * std::sqrt(expected),
                 absl::StrCat("intra-block edges ", intra));
  }
  double bfbt = NAN, dfdt = NAN;
  const auto bf = AssembleCase(ScenarioCase::kBFBT, spec, 0);
  const auto df = AssembleCase(ScenarioCase::kDFDT, spec, 0);
  if (check.Ok(bf, "BFBT") && check.Ok(df, "DFDT")) {
    const auto high = Dcor2(bf->features(), bf->sensitive());
    const auto low = Dcor2(df->features(), df->sensitive());
    if (check.Ok(high, "BFBT dcor2") && check.Ok(low, "DFDT dcor2")) {
      bfbt = *high;
      dfdt = *low;
      check.Expect(std::abs(bfbt - 0.7276) <= 0.10,
                   absl::StrFormat("BFBT dcor2 %.4f outside 0.7276 +/- 0.10",
                                   bfbt));
      check.Expect(dfdt < 0.10, absl::StrFormat("DFDT dcor2 %.4f", dfdt));
    }
  }
  const double seconds = Elapsed(start);
  check.Expect(seconds < 60.0, absl::StrFormat("took %.1fs", seconds));
  return check.Finish(absl::StrFormat(
      "intra-block %d, BFBT dcor2 %.4f, DFDT dcor2 %.4f, %.1fs", intra, bfbt,
      dfdt, seconds));
}

// ---- End to end ------------------------------------------------------------

struct BatteryMeans {
  double acc = 0.0;
  std::vector<double> dsp;
  double sens_dcor = 0.0;
  int ok = 0;
};

BatteryMeans Means(const std::vector<SeedOutcome>& outcomes) {
  BatteryMeans m;
  for (const SeedOutcome& o : outcomes) {
    if (!o.status.ok()) continue;
    ++m.ok;
    m.acc += o.metrics.acc;
    m.sens_dcor += o.metrics.sensitive_dcor;
    m.dsp.resize(o.metrics.delta_sp.size(), 0.0);
    for (size_t c = 0; c < o.metrics.delta_sp.size(); ++c) {
      m.dsp[c] += o.metrics.delta_sp[c].value_or(0.0);
    }
  }
  if (m.ok > 0) {
    m.acc /= m.ok;
    m.sens_dcor /= m.ok;
    for (double& d : m.dsp) d /= m.ok;
  }
  return m;
}

Outcome EndToEnd() {
  const auto start = std::chrono::steady_clock::now();
  Checker check;
  const auto cfg = testing::DeskConfig();
  if (!check.Ok(cfg, "config")) return check.Finish("config");
  const BatteryMeans v = Means(RunBattery(*cfg, Variant::kVanilla));
  const BatteryMeans m = Means(RunBattery(*cfg, Variant::kMapping));
  const int seeds = static_cast<int>(cfg->seeds.size());
  check.Expect(seeds == 10 && v.ok == seeds && m.ok == seeds, "failed seeds");
  if (v.dsp.size() != 2 || m.dsp.size() != 2) {
    check.Expect(false, "expected two sensitive columns");
    return check.Finish("no metrics");
  }
  auto reduction = [](double before, double after) {
    return before > 0.0 ? 1.0 - after / before : 0.0;
  };
  const double r_dcor = reduction(v.sens_dcor, m.sens_dcor);
  const double r0 = reduction(v.dsp[0], m.dsp[0]);
  const double r1 = reduction(v.dsp[1], m.dsp[1]);
  check.Expect(r_dcor >= 0.40, absl::StrFormat("sens_dcor reduction %.2f", r_dcor));
  check.Expect(r0 >= 0.40, absl::StrFormat("dsp_0 reduction %.2f", r0));
  check.Expect(r1 >= 0.40, absl::StrFormat("dsp_1 reduction %.2f", r1));
  check.Expect(std::abs(m.acc - v.acc) <= 0.05,
               absl::StrFormat("accuracy moved %.3f", m.acc - v.acc));
  const double seconds = Elapsed(start);
  check.Expect(seconds < 15 * 60.0, absl::StrFormat("took %.0fs", seconds));
  return check.Finish(absl::StrFormat(
      "reductions sens_dcor %.2f dsp_0 %.2f (%.3f->%.3f) dsp_1 %.2f "
      "(%.3f->%.3f), acc %.3f->%.3f, %.0fs",
      r_dcor, r0, v.dsp[0], m.dsp[0], r1, v.dsp[1], m.dsp[1], v.acc, m.acc,
      seconds));
}

// ---- German ------------------------------------------------------------------

Outcome GermanReproduction() {
  const char* dir = std::getenv("FAIRGRAPH_GERMAN_DIR");
  if (dir == nullptr || *dir == '\0') {
    return {Verdict::kSkip,
            "set FAIRGRAPH_GERMAN_DIR to a directory holding features.csv, "
            "edges.csv and labels.csv"};
  }
  const char* column = std::getenv("FAIRGRAPH_GERMAN_SENSITIVE");
  const std::string sensitive = column != nullptr ? column : "Gender";
  const auto start = std::chrono::steady_clock::now();
  Checker check;
  const fs::path root(dir);
  nlohmann::json doc;
  doc["dataset"]["csv"] = {{"features", (root / "features.csv").string()},
                           {"edges", (root / "edges.csv").string()},
                           {"labels", (root / "labels.csv").string()},
                           {"sensitive_columns", {sensitive}}};
  doc["preset"] = "german";
  doc["classifier"] = {{"arch", "gcn"}};
  const auto cfg = ParseRunConfig(doc.dump());
  if (!check.Ok(cfg, "config") || !check.Ok(cfg->Validate(), "config")) {
    return check.Finish("config");
  }
  const BatteryMeans v = Means(RunBattery(*cfg, Variant::kVanilla));
  const BatteryMeans m = Means(RunBattery(*cfg, Variant::kMapping));
  check.Expect(v.ok == 10 && m.ok == 10, "failed seeds");
  if (v.dsp.empty() || m.dsp.empty()) return check.Finish("no metrics");
  const double reduction = v.dsp[0] > 0 ? 1.0 - m.dsp[0] / v.dsp[0] : 0.0;
  check.Expect(reduction >= 0.60,
               absl::StrFormat("dsp reduction %.2f", reduction));
  check.Expect(m.dsp[0] <= 0.10, absl::StrFormat("dsp %.4f", m.dsp[0]));
  check.Expect(m.acc >= 0.65, absl::StrFormat("acc %.4f", m.acc));
  const double seconds = Elapsed(start);
  check.Expect(seconds < 10 * 60.0, absl::StrFormat("took %.0fs", seconds));
  return check.Finish(absl::StrFormat(
      "dsp %.4f->%.4f (reduction %.2f), acc %.4f->%.4f, %.0fs", v.dsp[0],
      m.dsp[0], reduction, v.acc, m.acc, seconds));
}

// ---- Attack ordering -----------------------------------------------------------

// Pairwise inversions against the expected order; one adjacent swap is one.
int Inversions(const std::vector<double>& ordered_means) {
  int count = 0;
  for (size_t i = 0; i < ordered_means.size(); ++i) {
    for (size_t j = i + 1; j < ordered_means.size(); ++j) {
      if (ordered_means[i] < ordered_means[j]) ++count;
    }
  }
  return count;
}

Outcome AttackOrdering() {
  Checker check;
  const SynthSpec spec;
  // Expected order from most to least leakage.
  const std::vector<ScenarioCase> order = {ScenarioCase::kBFBT,
                                           ScenarioCase::kBFDT,
                                           ScenarioCase::kDFBT,
                                           ScenarioCase::kDFDT};
  std::vector<AttackInput> inputs;
  for (ScenarioCase c : order) {
    const auto g = AssembleCase(c, spec, 0);
    if (!check.Ok(g, std::string(ScenarioName(c)))) return check.Finish("data");
    AttackScenario s;
    s.features = g->features();
    s.edges = g->edges();
    s.labels = g->labels();
    s.sensitive = g->sensitive();
    inputs.push_back({std::string(ScenarioName(c)), std::move(s)});
  }
  std::vector<uint64_t> seeds;
  for (uint64_t s = 0; s < 10; ++s) seeds.push_back(s);
  const auto rows = LeakageSweep(inputs, {0.2}, seeds, 1);
  if (!check.Ok(rows, "leakage sweep")) return check.Finish("sweep");
  std::string summary;
  for (const std::string metric : {"accuracy", "correlation"}) {
    std::vector<double> means;
    for (const AttackInput& in : inputs) {
      for (const LeakageRow& r : *rows) {
        if (r.pair == in.name && r.metric == metric) {
          check.Expect(r.n == 10, in.name + " has degenerate seeds");
          means.push_back(r.mean);
        }
      }
    }
    if (means.size() != order.size()) {
      check.Expect(false, "missing rows for " + metric);
      continue;
    }
    const int inversions = Inversions(means);
    check.Expect(inversions <= 1,
                 absl::StrCat(metric, " has ", inversions, " inversions"));
    absl::StrAppendFormat(&summary, "%s%s %.3f/%.3f/%.3f/%.3f", summary.empty() ? "" : ", ",
                          metric, means[0], means[1], means[2], means[3]);
  }
  return check.Finish(summary + " (BFBT/BFDT/DFBT/DFDT)");
}

// ---- Structural invariants -----------------------------------------------------

std::string ReadAll(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome StructuralInvariants() {
  Checker check;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 2.0);
  int prune_violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 30;
    std::vector<Edge> edges = testing::RandomEdges(n, u(rng), rng);
    EdgeWeightSet weights = EdgeWeightSet::Uniform(edges, 0.0);
    for (int e = 0; e < weights.raw.size(); ++e) weights.raw(e) = normal(rng);
    const auto pruned = PostPrune(weights, u(rng));
    if (!pruned.ok()) {
      ++prune_violations;
      continue;
    }
    const std::set<Edge> input(edges.begin(), edges.end());
    bool ok = pruned->kept.size() + pruned->removed.size() == edges.size();
    for (const Edge& e : pruned->kept) ok = ok && input.count(e) == 1;
    const auto adj = NormalizedAdjacency(n, pruned->kept, std::nullopt, false);
    if (!adj.ok()) {
      ++prune_violations;
      continue;
    }
    const Eigen::MatrixXd dense(*adj);
    ok = ok && dense == dense.transpose();
    if (!ok) ++prune_violations;
  }
  check.Expect(prune_violations == 0,
               absl::StrCat(prune_violations, " of 200 pruning trials"));

  const fs::path dir = fs::temp_directory_path() /
                       absl::StrCat("fairgraph_acceptance_", ::getpid());
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto graph = testing::RandomGraph(60, 5, 2, 0.1, rng);
  if (!check.Ok(graph, "graph") || !check.Ok(SaveGraph(*graph, dir.string()),
                                             "save graph")) {
    return check.Finish("setup");
  }
  nlohmann::json doc;
  doc["dataset"]["csv"] = {{"features", (dir / "features.csv").string()},
                           {"edges", (dir / "edges.csv").string()},
                           {"labels", (dir / "labels.csv").string()},
                           {"sensitive_columns", {"s0", "s1"}}};
  doc["feature_epochs"] = 30;
  doc["topology_epochs"] = 30;
  doc["r"] = 0.4;
  doc["r_s"] = 0.5;
  doc["classifier"] = {{"epochs", 30}};
  doc["seeds"] = {0, 1, 2};
  auto cfg = ParseRunConfig(doc.dump());
  if (!check.Ok(cfg, "config")) return check.Finish("config");

  RunConfig ablated = *cfg;
  ablated.ablation = Ablation::kWithoutFeature;
  const SeedOutcome without_fe = RunSeed(ablated, Variant::kMapping, *graph, 0);
  if (check.Ok(without_fe.status, "w/o-fe")) {
    check.Expect(without_fe.debiased_features == graph->features(),
                 "w/o-fe changed the features");
  }
  ablated.ablation = Ablation::kWithoutTopology;
  const SeedOutcome without_to = RunSeed(ablated, Variant::kMapping, *graph, 0);
  if (check.Ok(without_to.status, "w/o-to")) {
    check.Expect(without_to.classifier_edges == graph->edges(),
                 "w/o-to changed the edges");
  }

  int files = 0;
  const auto a = RunAndWrite(*cfg, Variant::kMapping, (dir / "a").string());
  const auto b = RunAndWrite(*cfg, Variant::kMapping, (dir / "b").string());
  if (check.Ok(a, "run a") && check.Ok(b, "run b")) {
    check.Expect(*a == kExitOk && *b == kExitOk, "runs reported failures");
    for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
      if (!entry.is_regular_file()) continue;
      const fs::path rel = fs::relative(entry.path(), dir / "a");
      check.Expect(ReadAll(entry.path()) == ReadAll(dir / "b" / rel),
                   rel.string() + " differs between runs");
      ++files;
    }
    check.Expect(files > 3, "no per-seed artifacts");
  }
  fs::remove_all(dir);
  return check.Finish(absl::StrCat(
      "200 pruning trials, ablation identities, ", files,
      " artifacts byte-identical across reruns"));
}

int Main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"statistics_correctness", StatisticsCorrectness},
      {"gradient_suite", GradientSuite},
      {"masking_set_logic", MaskingLogic},
      {"synthetic_fidelity", SyntheticFidelity},
      {"end_to_end_debiasing", EndToEnd},
      {"german_reproduction", GermanReproduction},
      {"attack_ordering", AttackOrdering},
      {"structural_invariants", StructuralInvariants},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const Outcome o = c.run();
    const char* verdict = o.verdict == Verdict::kPass   ? "PASS"
                          : o.verdict == Verdict::kSkip ? "SKIP"
                                                        : "FAIL";
    if (o.verdict == Verdict::kFail) ++failures;
    std::printf("%s %s: %s\n", verdict, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace fairgraph

int main() { return fairgraph::Main(); }
