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

#ifndef FAIRGRAPH_DCOV_H_
#define FAIRGRAPH_DCOV_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "fairgraph/graph.h"

namespace fairgraph {

// Empirical (V-statistic) distance covariance and correlation. Rows are
// samples; columns are dimensions. Everything is double precision.

// Double-centered Euclidean distance matrix:
//   A_kl = a_kl - mean_l a_kl - mean_k a_kl + mean_kl a_kl.
// Row and column sums vanish up to rounding.
class CenteredDistanceMatrix {
 public:
  const Eigen::MatrixXd& values() const { return values_; }
  int n() const { return static_cast<int>(values_.rows()); }

 private:
  friend absl::StatusOr<CenteredDistanceMatrix> DoubleCenter(
      const Eigen::MatrixXd& distances);
  explicit CenteredDistanceMatrix(Eigen::MatrixXd values)
      : values_(std::move(values)) {}

  Eigen::MatrixXd values_;
};

// Euclidean distances between rows. Non-finite input is an error.
absl::StatusOr<Eigen::MatrixXd> PairwiseDistances(const Eigen::MatrixXd& m);

// Errors on a non-square or asymmetric input.
absl::StatusOr<CenteredDistanceMatrix> DoubleCenter(
    const Eigen::MatrixXd& distances);

// V^2_n(X, Y) = (1/n^2) sum_kl A_kl B_kl, clamped at 0. Runs in O(n^2 (p+q))
// time and O(n) memory.
absl::StatusOr<double> Dcov2(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

// R^2_n(X, Y) = V^2(X,Y) / sqrt(V^2(X) V^2(Y)), or exactly 0 when the
// denominator product is at most 1e-24.
absl::StatusOr<double> Dcor2(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

// V^2_n for univariate samples in O(n log n): sort plus Fenwick-tree sums of
// |x_i - x_j| |y_i - y_j|.
absl::StatusOr<double> Dcov2FastUnivariate(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& y);

// R^2_n for univariate samples built on Dcov2FastUnivariate.
absl::StatusOr<double> Dcor2FastUnivariate(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& y);

// Fraction of edges whose endpoints share the value of sensitive column
// `column`.
absl::StatusOr<double> SensitiveHomophily(const AttributedGraph& graph,
                                          int column);

// Permutation test of independence on dcor2: (1 + #{perm >= observed}) /
// (1 + trials).
absl::StatusOr<double> PermutationIndependencePValue(const Eigen::MatrixXd& x,
                                                     const Eigen::MatrixXd& y,
                                                     int trials,
                                                     uint64_t seed);

// Streaming view of the double-centered distance matrix of a fixed sample,
// used where only A_kl entries (not the n x n matrix) are needed: entries
// are rebuilt from O(n) row means on demand.
class CenteredDistances {
 public:
  explicit CenteredDistances(Eigen::MatrixXd sample);

  int n() const { return static_cast<int>(sample_.rows()); }
  double Distance(int k, int l) const;
  double Entry(int k, int l) const {
    if (!category_.empty()) {
      return table_[category_[k] * num_categories_ + category_[l]];
    }
    return Distance(k, l) - row_mean_(k) - row_mean_(l) + grand_mean_;
  }
  // V^2_n of the sample with itself.
  double SelfDcov2() const { return self_dcov2_; }

  // Categorical samples (at most 64 distinct rows) expose the centered
  // entries as a small table indexed by row category.
  bool categorical() const { return !category_.empty(); }
  int num_categories() const { return num_categories_; }
  int category(int k) const { return category_[k]; }
  double TableEntry(int a, int b) const {
    return table_[a * num_categories_ + b];
  }

 private:
  Eigen::MatrixXd sample_;
  Eigen::VectorXd row_mean_;
  double grand_mean_ = 0.0;
  double self_dcov2_ = 0.0;
  // Populated only when the sample has at most 64 distinct rows.
  std::vector<int> category_;
  std::vector<double> table_;
  int num_categories_ = 0;
};

}  // namespace fairgraph

#endif  // FAIRGRAPH_DCOV_H_
