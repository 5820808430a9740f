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

#include "fairgraph/dcov.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "absl/strings/str_cat.h"
#include "fairgraph/status_macros.h"

namespace fairgraph {
namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kZeroDenominator = 1e-24;

double RowDistance(const RowMajorMatrix& m, int k, int l) {
  const double* a = m.data() + static_cast<Eigen::Index>(k) * m.cols();
  const double* b = m.data() + static_cast<Eigen::Index>(l) * m.cols();
  double sum = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double d = a[c] - b[c];
    sum += d * d;
  }
  return std::sqrt(sum);
}

// The three V-statistics V^2(X,Y), V^2(X,X), V^2(Y,Y) from one pass over
// the pairs, using
//   sum_kl A_kl B_kl = sum a_kl b_kl - (2/n) sum_k a_k. b_k. + a.. b.. / n^2.
struct DcovTriple {
  double xy = 0.0;
  double xx = 0.0;
  double yy = 0.0;
};

DcovTriple ComputeDcovTriple(const RowMajorMatrix& x, const RowMajorMatrix& y) {
  const int n = static_cast<int>(x.rows());
  std::vector<double> row_a(n, 0.0), row_b(n, 0.0);
  double sum_ab = 0.0, sum_aa = 0.0, sum_bb = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      const double a = RowDistance(x, k, l);
      const double b = RowDistance(y, k, l);
      row_a[k] += a;
      row_a[l] += a;
      row_b[k] += b;
      row_b[l] += b;
      sum_ab += a * b;
      sum_aa += a * a;
      sum_bb += b * b;
    }
  }
  double cross_ab = 0.0, cross_aa = 0.0, cross_bb = 0.0;
  double total_a = 0.0, total_b = 0.0;
  for (int k = 0; k < n; ++k) {
    cross_ab += row_a[k] * row_b[k];
    cross_aa += row_a[k] * row_a[k];
    cross_bb += row_b[k] * row_b[k];
    total_a += row_a[k];
    total_b += row_b[k];
  }
  const double nn = static_cast<double>(n);
  auto combine = [nn](double pair_sum, double cross, double ta, double tb) {
    const double v = 2.0 * pair_sum / (nn * nn) - 2.0 * cross / (nn * nn * nn) +
                     ta * tb / (nn * nn * nn * nn);
    return std::max(v, 0.0);
  };
  return {combine(sum_ab, cross_ab, total_a, total_b),
          combine(sum_aa, cross_aa, total_a, total_a),
          combine(sum_bb, cross_bb, total_b, total_b)};
}

absl::Status CheckSamples(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() != y.rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sample counts differ: ", x.rows(), " vs ", y.rows()));
  }
  if (x.rows() < 1 || x.cols() < 1 || y.cols() < 1) {
    return absl::InvalidArgumentError("samples must be nonempty");
  }
  if (!x.allFinite() || !y.allFinite()) {
    return absl::InvalidArgumentError("samples must be finite");
  }
  return absl::OkStatus();
}

double Ratio(const DcovTriple& t) {
  const double denom = t.xx * t.yy;
  if (denom <= kZeroDenominator) return 0.0;
  return std::clamp(t.xy / std::sqrt(denom), 0.0, 1.0);
}

// Fenwick tree over ranks, holding running sums.
class Fenwick {
 public:
  explicit Fenwick(int n) : tree_(n + 1, 0.0) {}
  void Add(int index, double value) {
    for (int i = index + 1; i < static_cast<int>(tree_.size()); i += i & -i) {
      tree_[i] += value;
    }
  }
  // Sum over ranks [0, index].
  double Prefix(int index) const {
    double s = 0.0;
    for (int i = index + 1; i > 0; i -= i & -i) s += tree_[i];
    return s;
  }

 private:
  std::vector<double> tree_;
};

// sum_j |v_i - v_j| for every i, via sorting and prefix sums.
std::vector<double> AbsoluteRowSums(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return v[a] < v[b]; });
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  std::vector<double> sums(n);
  double prefix = 0.0;
  for (int r = 0; r < n; ++r) {
    const int i = order[r];
    const double below = v[i] * r - prefix;
    const double above = (total - prefix - v[i]) - v[i] * (n - r - 1);
    sums[i] = below + above;
    prefix += v[i];
  }
  return sums;
}

}  // namespace

absl::StatusOr<Eigen::MatrixXd> PairwiseDistances(const Eigen::MatrixXd& m) {
  if (m.rows() < 1 || m.cols() < 1) {
    return absl::InvalidArgumentError("sample matrix must be nonempty");
  }
  if (!m.allFinite()) {
    return absl::InvalidArgumentError("sample matrix must be finite");
  }
  const RowMajorMatrix rows = m;
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      d(k, l) = d(l, k) = RowDistance(rows, k, l);
    }
  }
  return d;
}

absl::StatusOr<CenteredDistanceMatrix> DoubleCenter(
    const Eigen::MatrixXd& distances) {
  if (distances.rows() != distances.cols()) {
    return absl::InvalidArgumentError("distance matrix must be square");
  }
  const double scale = std::max(1.0, distances.cwiseAbs().maxCoeff());
  if ((distances - distances.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * scale) {
    return absl::InvalidArgumentError("distance matrix must be symmetric");
  }
  // Symmetrize first and combine the means commutatively so the result is
  // exactly symmetric.
  const Eigen::MatrixXd sym = 0.5 * (distances + distances.transpose());
  const Eigen::VectorXd mean = sym.rowwise().mean();
  const double grand = sym.mean();
  const int n = static_cast<int>(sym.rows());
  Eigen::MatrixXd centered(n, n);
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      centered(k, l) = sym(k, l) - (mean(k) + mean(l)) + grand;
    }
  }
  return CenteredDistanceMatrix(std::move(centered));
}

absl::StatusOr<double> Dcov2(const Eigen::MatrixXd& x,
                             const Eigen::MatrixXd& y) {
  FG_RETURN_IF_ERROR(CheckSamples(x, y));
  return ComputeDcovTriple(x, y).xy;
}

absl::StatusOr<double> Dcor2(const Eigen::MatrixXd& x,
                             const Eigen::MatrixXd& y) {
  FG_RETURN_IF_ERROR(CheckSamples(x, y));
  return Ratio(ComputeDcovTriple(x, y));
}

absl::StatusOr<double> Dcov2FastUnivariate(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& y) {
  FG_RETURN_IF_ERROR(CheckSamples(x, y));
  const int n = static_cast<int>(x.size());
  // Distances are translation invariant; centering keeps the products small.
  std::vector<double> xs(n), ys(n);
  const double mx = x.mean(), my = y.mean();
  for (int i = 0; i < n; ++i) {
    xs[i] = x(i) - mx;
    ys[i] = y(i) - my;
  }

  std::vector<double> y_sorted = ys;
  std::sort(y_sorted.begin(), y_sorted.end());
  y_sorted.erase(std::unique(y_sorted.begin(), y_sorted.end()), y_sorted.end());
  std::vector<int> y_rank(n);
  for (int i = 0; i < n; ++i) {
    y_rank[i] = static_cast<int>(
        std::lower_bound(y_sorted.begin(), y_sorted.end(), ys[i]) -
        y_sorted.begin());
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return xs[a] < xs[b]; });

  // For j visited before i we have x_j <= x_i, so
  // |x_i - x_j||y_i - y_j| = +/-(x_i - x_j)(y_i - y_j) with the sign set by
  // whether y_j <= y_i. Expanding the product needs four running sums.
  const int ranks = static_cast<int>(y_sorted.size());
  Fenwick count(ranks), sum_x(ranks), sum_y(ranks), sum_xy(ranks);
  double all_count = 0.0, all_x = 0.0, all_y = 0.0, all_xy = 0.0;
  double half_pairs = 0.0;
  for (int i : order) {
    const int r = y_rank[i];
    const double c_lo = count.Prefix(r), x_lo = sum_x.Prefix(r);
    const double y_lo = sum_y.Prefix(r), xy_lo = sum_xy.Prefix(r);
    const double c_hi = all_count - c_lo, x_hi = all_x - x_lo;
    const double y_hi = all_y - y_lo, xy_hi = all_xy - xy_lo;
    const double xi = xs[i], yi = ys[i];
    half_pairs += (c_lo * xi * yi - xi * y_lo - yi * x_lo + xy_lo) -
                  (c_hi * xi * yi - xi * y_hi - yi * x_hi + xy_hi);
    count.Add(r, 1.0);
    sum_x.Add(r, xi);
    sum_y.Add(r, yi);
    sum_xy.Add(r, xi * yi);
    all_count += 1.0;
    all_x += xi;
    all_y += yi;
    all_xy += xi * yi;
  }

  const std::vector<double> row_a = AbsoluteRowSums(xs);
  const std::vector<double> row_b = AbsoluteRowSums(ys);
  double cross = 0.0, total_a = 0.0, total_b = 0.0;
  for (int i = 0; i < n; ++i) {
    cross += row_a[i] * row_b[i];
    total_a += row_a[i];
    total_b += row_b[i];
  }
  const double nn = static_cast<double>(n);
  const double v = 2.0 * half_pairs / (nn * nn) - 2.0 * cross / (nn * nn * nn) +
                   total_a * total_b / (nn * nn * nn * nn);
  return std::max(v, 0.0);
}

absl::StatusOr<double> Dcor2FastUnivariate(const Eigen::VectorXd& x,
                                           const Eigen::VectorXd& y) {
  FG_ASSIGN_OR_RETURN(const double xy, Dcov2FastUnivariate(x, y));
  FG_ASSIGN_OR_RETURN(const double xx, Dcov2FastUnivariate(x, x));
  FG_ASSIGN_OR_RETURN(const double yy, Dcov2FastUnivariate(y, y));
  return Ratio({xy, xx, yy});
}

absl::StatusOr<double> SensitiveHomophily(const AttributedGraph& graph,
                                          int column) {
  if (column < 0 || column >= graph.num_sensitive()) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitive column ", column, " out of range"));
  }
  if (graph.edges().empty()) {
    return absl::FailedPreconditionError(
        "sensitive homophily is undefined without edges");
  }
  const auto& s = graph.sensitive();
  int same = 0;
  for (const Edge& e : graph.edges()) {
    if (s(e.u, column) == s(e.v, column)) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(graph.edges().size());
}

absl::StatusOr<double> PermutationIndependencePValue(const Eigen::MatrixXd& x,
                                                     const Eigen::MatrixXd& y,
                                                     int trials,
                                                     uint64_t seed) {
  if (trials < 1) {
    return absl::InvalidArgumentError("trials must be at least 1");
  }
  FG_ASSIGN_OR_RETURN(const double observed, Dcor2(x, y));
  std::mt19937_64 rng(seed);
  std::vector<int> perm(y.rows());
  std::iota(perm.begin(), perm.end(), 0);
  Eigen::MatrixXd shuffled(y.rows(), y.cols());
  int at_least = 0;
  for (int t = 0; t < trials; ++t) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (Eigen::Index i = 0; i < y.rows(); ++i) shuffled.row(i) = y.row(perm[i]);
    FG_ASSIGN_OR_RETURN(const double value, Dcor2(x, shuffled));
    if (value >= observed) ++at_least;
  }
  return (1.0 + at_least) / (1.0 + trials);
}

CenteredDistances::CenteredDistances(Eigen::MatrixXd sample)
    : sample_(std::move(sample)) {
  const RowMajorMatrix rows = sample_;
  const int n = static_cast<int>(rows.rows());
  row_mean_ = Eigen::VectorXd::Zero(n);
  double sum_sq = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      const double d = RowDistance(rows, k, l);
      row_mean_(k) += d;
      row_mean_(l) += d;
      sum_sq += 2.0 * d * d;
    }
  }
  const double nn = static_cast<double>(n);
  grand_mean_ = row_mean_.sum() / (nn * nn);
  const double cross = row_mean_.squaredNorm();
  row_mean_ /= nn;
  self_dcov2_ = std::max(
      0.0, sum_sq / (nn * nn) - 2.0 * cross / (nn * nn * nn) +
               grand_mean_ * grand_mean_);

  // Samples with few distinct rows (binary sensitive attributes) get a
  // lookup table of centered entries indexed by category pair.
  constexpr int kMaxCategories = 64;
  std::map<std::vector<double>, int> seen;
  std::vector<int> representative;
  category_.resize(n);
  for (int k = 0; k < n; ++k) {
    std::vector<double> key(rows.row(k).data(), rows.row(k).data() + rows.cols());
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<int>(seen.size()));
    if (inserted) {
      if (static_cast<int>(seen.size()) > kMaxCategories) {
        category_.clear();
        return;
      }
      representative.push_back(k);
    }
    category_[k] = it->second;
  }
  num_categories_ = static_cast<int>(representative.size());
  table_.resize(static_cast<size_t>(num_categories_) * num_categories_);
  for (int a = 0; a < num_categories_; ++a) {
    for (int b = 0; b < num_categories_; ++b) {
      const int k = representative[a], l = representative[b];
      table_[a * num_categories_ + b] =
          Distance(k, l) - row_mean_(k) - row_mean_(l) + grand_mean_;
    }
  }
}

double CenteredDistances::Distance(int k, int l) const {
  double sum = 0.0;
  for (Eigen::Index c = 0; c < sample_.cols(); ++c) {
    const double d = sample_(k, c) - sample_(l, c);
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace fairgraph
