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


// Finite-difference checks for every differentiable op, layer and loss.
// Shared by the unit tests and the acceptance binary.

#ifndef FAIRGRAPH_TESTS_GRADIENT_SUITE_H_
#define FAIRGRAPH_TESTS_GRADIENT_SUITE_H_

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairgraph/autodiff.h"
#include "fairgraph/dcov.h"
#include "fairgraph/graph.h"
#include "fairgraph/layers.h"
#include "fairgraph/optim.h"

namespace fairgraph::testing {

inline constexpr double kGradientTolerance = 1e-4;
inline constexpr int kGradientInstances = 20;

struct GradientCase {
  std::string name;
  std::function<nn::GradCheckReport(uint64_t seed)> run;
};

namespace grad_internal {

using nn::NamedParam;
using nn::Tape;
using nn::Var;

inline Eigen::MatrixXd Gaussian(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

// Values bounded away from zero so ReLU and distance kinks stay out of the
// finite-difference stencil.
inline Eigen::MatrixXd AwayFromZero(int r, int c, std::mt19937_64& rng) {
  Eigen::MatrixXd m = Gaussian(r, c, rng);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    double& x = m.data()[i];
    if (std::abs(x) < 0.05) x = x < 0 ? -0.05 - std::abs(x) : 0.05 + x;
  }
  return m;
}

// Random linear functional that turns any output into a scalar loss.
inline Var Project(Var out, const Eigen::MatrixXd& r) {
  return nn::Sum(nn::MulConstant(out, r));
}

inline std::vector<Edge> Edges(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) edges.push_back({u, v});
  if (edges.empty()) edges.push_back({0, n - 1});
  return edges;
}

inline int SizeFor(std::mt19937_64& rng) {
  return std::uniform_int_distribution<int>(4, 16)(rng);
}

inline Eigen::MatrixXd BinaryColumns(int n, int k, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  Eigen::MatrixXd s(n, k);
  for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = coin(rng);
  s(0, 0) = 0;
  s(1, 0) = 1;
  return s;
}

}  // namespace grad_internal

inline std::vector<GradientCase> AllGradientCases() {
  using namespace grad_internal;
  using nn::GradCheck;
  std::vector<GradientCase> cases;

  auto add = [&](std::string name,
                 std::function<nn::GradCheckReport(std::mt19937_64&)> body) {
    cases.push_back({std::move(name), [body](uint64_t seed) {
                       std::mt19937_64 rng(seed * 7919 + 17);
                       return body(rng);
                     }});
  };

  add("matmul", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng), k = 3, m = 2;
    const Eigen::MatrixXd r = Gaussian(n, m, rng);
    return GradCheck({{"a", Gaussian(n, k, rng)}, {"b", Gaussian(k, m, rng)}},
                     [r](Tape&, std::span<const Var> p) {
                       return Project(nn::MatMul(p[0], p[1]), r);
                     });
  });
  add("add_sub", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const Eigen::MatrixXd r = Gaussian(n, 2, rng);
    return GradCheck({{"a", Gaussian(n, 2, rng)}, {"b", Gaussian(n, 2, rng)}},
                     [r](Tape&, std::span<const Var> p) {
                       return Project(nn::Sub(nn::Add(p[0], p[1]),
                                              nn::Scale(p[1], 0.3)),
                                      r);
                     });
  });
  add("add_bias", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const Eigen::MatrixXd r = Gaussian(n, 3, rng);
    return GradCheck({{"a", Gaussian(n, 3, rng)}, {"bias", Gaussian(1, 3, rng)}},
                     [r](Tape&, std::span<const Var> p) {
                       return Project(nn::AddBias(p[0], p[1]), r);
                     });
  });
  add("mul_constant", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const Eigen::MatrixXd c = Gaussian(n, 2, rng), r = Gaussian(n, 2, rng);
    return GradCheck({{"a", Gaussian(n, 2, rng)}},
                     [c, r](Tape&, std::span<const Var> p) {
                       return Project(nn::MulConstant(p[0], c), r);
                     });
  });
  add("relu", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const Eigen::MatrixXd r = Gaussian(n, 3, rng);
    return GradCheck({{"a", AwayFromZero(n, 3, rng)}},
                     [r](Tape&, std::span<const Var> p) {
                       return Project(nn::Relu(p[0]), r);
                     });
  });
  add("sigmoid", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const Eigen::MatrixXd r = Gaussian(n, 2, rng);
    return GradCheck({{"a", 2.0 * Gaussian(n, 2, rng)}},
                     [r](Tape&, std::span<const Var> p) {
                       return Project(nn::Sigmoid(p[0]), r);
                     });
  });
  add("sum_mean", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const Eigen::MatrixXd r = Gaussian(n, 2, rng);
    return GradCheck({{"a", Gaussian(n, 2, rng)}},
                     [r](Tape&, std::span<const Var> p) {
                       Var sq = nn::MulConstant(p[0], r);
                       return nn::Add(nn::Sum(sq), nn::Scale(nn::Mean(nn::Sigmoid(sq)), 3.0));
                     });
  });
  add("frobenius_norm", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    return GradCheck({{"a", Gaussian(n, 3, rng)}},
                     [](Tape&, std::span<const Var> p) {
                       return nn::FrobeniusNorm(p[0]);
                     });
  });
  add("spmm", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    auto m = std::make_shared<SparseMatrix>(
        *NormalizedAdjacency(n, Edges(n, 0.3, rng), std::nullopt, true));
    const Eigen::MatrixXd r = Gaussian(n, 2, rng);
    return GradCheck({{"h", Gaussian(n, 2, rng)}},
                     [m, r](Tape&, std::span<const Var> p) {
                       return Project(nn::SpMM(*m, p[0]), r);
                     });
  });
  add("gather_rows", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    std::vector<int> rows = {n - 1, 0, 2, 0};
    const Eigen::MatrixXd r = Gaussian(4, 2, rng);
    return GradCheck({{"a", Gaussian(n, 2, rng)}},
                     [rows, r](Tape&, std::span<const Var> p) {
                       return Project(nn::GatherRows(p[0], rows), r);
                     });
  });
  add("scale_columns", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const Eigen::MatrixXd x = Gaussian(n, 4, rng), r = Gaussian(n, 4, rng);
    return GradCheck({{"w", Gaussian(4, 1, rng)}},
                     [x, r](Tape&, std::span<const Var> p) {
                       return Project(nn::ScaleColumns(x, p[0]), r);
                     });
  });
  add("weighted_gcn_propagate", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const std::vector<Edge> edges = Edges(n, 0.35, rng);
    const Eigen::MatrixXd r = Gaussian(n, 2, rng);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    Eigen::MatrixXd w(edges.size(), 1);
    for (Eigen::Index e = 0; e < w.rows(); ++e) w(e, 0) = u(rng);
    return GradCheck({{"edge_w", w}, {"h", Gaussian(n, 2, rng)}},
                     [n, edges, r](Tape&, std::span<const Var> p) {
                       return Project(
                           nn::WeightedGcnPropagate(n, edges, p[0], p[1]), r);
                     });
  });
  add("bce", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const Eigen::MatrixXd t = BinaryColumns(n, 1, rng);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    Eigen::MatrixXd prob(n, 1);
    for (int i = 0; i < n; ++i) prob(i, 0) = u(rng);
    return GradCheck({{"p", prob}}, [t](Tape&, std::span<const Var> p) {
      return nn::BinaryCrossEntropy(p[0], t);
    });
  });
  add("bce_through_sigmoid", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const Eigen::MatrixXd t = BinaryColumns(n, 1, rng);
    return GradCheck({{"logit", 2.0 * Gaussian(n, 1, rng)}},
                     [t](Tape&, std::span<const Var> p) {
                       return nn::BinaryCrossEntropy(nn::Sigmoid(p[0]), t);
                     });
  });
  add("dcov_loss_multivariate", [](std::mt19937_64& rng) {
    const int n = std::max(6, SizeFor(rng));
    auto s = std::make_shared<CenteredDistances>(Gaussian(n, 2, rng));
    return GradCheck({{"x", Gaussian(n, 2, rng)}},
                     [s](Tape&, std::span<const Var> p) {
                       return nn::DcovLoss(p[0], *s);
                     });
  });
  add("dcov_loss_categorical", [](std::mt19937_64& rng) {
    const int n = std::max(6, SizeFor(rng));
    auto s = std::make_shared<CenteredDistances>(BinaryColumns(n, 2, rng));
    return GradCheck({{"x", Gaussian(n, 1, rng)}},
                     [s](Tape&, std::span<const Var> p) {
                       return nn::DcovLoss(p[0], *s);
                     });
  });
  add("dcov_loss_through_sigmoid", [](std::mt19937_64& rng) {
    const int n = std::max(6, SizeFor(rng));
    auto s = std::make_shared<CenteredDistances>(BinaryColumns(n, 1, rng));
    const Eigen::MatrixXd x = Gaussian(n, 3, rng);
    return GradCheck({{"w", Gaussian(3, 1, rng)}},
                     [s, x](Tape& tape, std::span<const Var> p) {
                       Var logits = nn::MatMul(tape.Constant(x), p[0]);
                       return nn::DcovLoss(nn::Sigmoid(logits), *s);
                     });
  });
  add("dropout_fixed_mask", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const Eigen::MatrixXd r = Gaussian(n, 3, rng);
    const uint64_t mask_seed = rng();
    return GradCheck({{"a", Gaussian(n, 3, rng)}},
                     [r, mask_seed](Tape&, std::span<const Var> p) {
                       std::mt19937_64 mask_rng(mask_seed);
                       return Project(nn::Dropout(p[0], 0.2, true, mask_rng), r);
                     });
  });
  add("linear_layer", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    const Eigen::MatrixXd x = Gaussian(n, 4, rng), r = Gaussian(n, 2, rng);
    return GradCheck({{"w", Gaussian(4, 2, rng)}, {"b", Gaussian(1, 2, rng)}},
                     [x, r](Tape& tape, std::span<const Var> p) {
                       return Project(
                           *nn::LinearForward(tape.Constant(x), p[0], p[1]), r);
                     });
  });
  add("gcn_layer", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    auto a = std::make_shared<SparseMatrix>(
        *NormalizedAdjacency(n, Edges(n, 0.3, rng), std::nullopt, true));
    const Eigen::MatrixXd r = Gaussian(n, 2, rng);
    return GradCheck({{"h", Gaussian(n, 3, rng)}, {"w", Gaussian(3, 2, rng)}},
                     [a, r](Tape&, std::span<const Var> p) {
                       return Project(*nn::GcnLayer(*a, p[0], p[1]), r);
                     });
  });
  add("sage_layer", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    auto m = std::make_shared<SparseMatrix>(
        NeighborMeanOperator(n, Edges(n, 0.3, rng)));
    const Eigen::MatrixXd r = Gaussian(n, 2, rng);
    return GradCheck({{"h", Gaussian(n, 3, rng)},
                      {"w_self", Gaussian(3, 2, rng)},
                      {"w_neigh", Gaussian(3, 2, rng)}},
                     [m, r](Tape&, std::span<const Var> p) {
                       return Project(*nn::SageLayer(*m, p[0], p[1], p[2]), r);
                     });
  });
  add("gin_layer", [](std::mt19937_64& rng) {
    const int n = SizeFor(rng);
    auto m = std::make_shared<SparseMatrix>(
        GinAggregationOperator(n, Edges(n, 0.3, rng), 0.0));
    const Eigen::MatrixXd r = Gaussian(n, 2, rng);
    return GradCheck({{"h", Gaussian(n, 3, rng)},
                      {"w1", Gaussian(3, 4, rng)},
                      {"b1", Gaussian(1, 4, rng)},
                      {"w2", Gaussian(4, 2, rng)},
                      {"b2", Gaussian(1, 2, rng)}},
                     [m, r](Tape&, std::span<const Var> p) {
                       nn::GinMlp mlp{p[1], p[2], p[3], p[4]};
                       return Project(*nn::GinLayer(*m, p[0], mlp), r);
                     });
  });
  add("mlp_bce", [](std::mt19937_64& rng) {
    const int n = 8;
    const Eigen::MatrixXd x = Gaussian(n, 3, rng);
    const Eigen::MatrixXd t = BinaryColumns(n, 1, rng);
    return GradCheck({{"w", Gaussian(3, 1, rng)}, {"b", Gaussian(1, 1, rng)}},
                     [x, t](Tape& tape, std::span<const Var> p) {
                       Var logits = *nn::LinearForward(tape.Constant(x), p[0], p[1]);
                       return nn::BinaryCrossEntropy(nn::Sigmoid(logits), t);
                     });
  });
  add("gcn_dcov", [](std::mt19937_64& rng) {
    const int n = 8;
    auto a = std::make_shared<SparseMatrix>(
        *NormalizedAdjacency(n, Edges(n, 0.3, rng), std::nullopt, true));
    auto s = std::make_shared<CenteredDistances>(BinaryColumns(n, 2, rng));
    const Eigen::MatrixXd x = Gaussian(n, 3, rng);
    return GradCheck({{"w", Gaussian(3, 2, rng)}},
                     [a, s, x](Tape& tape, std::span<const Var> p) {
                       Var h = *nn::GcnLayer(*a, tape.Constant(x), p[0]);
                       return nn::DcovLoss(h, *s);
                     });
  });
  return cases;
}

struct GradientSuiteResult {
  std::string name;
  int instances = 0;
  double worst = 0.0;
};

inline std::vector<GradientSuiteResult> RunGradientSuite(int instances) {
  std::vector<GradientSuiteResult> results;
  for (const GradientCase& c : AllGradientCases()) {
    GradientSuiteResult r{c.name, 0, 0.0};
    for (int i = 0; i < instances; ++i) {
      r.worst = std::max(r.worst, c.run(static_cast<uint64_t>(i)).MaxError());
      ++r.instances;
    }
    results.push_back(r);
  }
  return results;
}

}  // namespace fairgraph::testing

#endif  // FAIRGRAPH_TESTS_GRADIENT_SUITE_H_
