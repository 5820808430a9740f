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

#ifndef FAIRGRAPH_GRAPH_H_
#define FAIRGRAPH_GRAPH_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace fairgraph {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// An undirected edge, always stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Canonicalizes orientation, sorts, and removes duplicate pairs. Self-loops
// are dropped.
std::vector<Edge> CanonicalizeEdges(std::vector<Edge> edges);

// Undirected attributed graph with non-sensitive features, binary sensitive
// attributes, and binary node labels. Immutable once created.
//
// Column 0 of the sensitive matrix is the major attribute by convention.
class AttributedGraph {
 public:
  // Validates every invariant. `edges` may arrive in either orientation and
  // with duplicates; they are canonicalized. Self-loops and out-of-range
  // endpoints are errors. When `node_ids` is empty the identity mapping is
  // used.
  static absl::StatusOr<AttributedGraph> Create(
      int num_nodes, std::vector<Edge> edges, Eigen::MatrixXd features,
      Eigen::MatrixXd sensitive, std::vector<int> labels,
      std::vector<std::string> feature_names,
      std::vector<std::string> sensitive_names,
      std::vector<int64_t> node_ids = {});

  int num_nodes() const { return num_nodes_; }
  int num_features() const { return static_cast<int>(features_.cols()); }
  int num_sensitive() const { return static_cast<int>(sensitive_.cols()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::MatrixXd& sensitive() const { return sensitive_; }
  const std::vector<int>& labels() const { return labels_; }
  Eigen::VectorXd labels_as_vector() const;
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  const std::vector<std::string>& sensitive_names() const {
    return sensitive_names_;
  }
  // Original file id of each dense node index.
  const std::vector<int64_t>& node_ids() const { return node_ids_; }

  // Same graph with different features (and names); used after masking and
  // reconstruction.
  absl::StatusOr<AttributedGraph> WithFeatures(
      Eigen::MatrixXd features, std::vector<std::string> names) const;
  // Same graph with a different edge set.
  absl::StatusOr<AttributedGraph> WithEdges(std::vector<Edge> edges) const;

  // Structural equality: same nodes, edges, values, names and ids.
  friend bool operator==(const AttributedGraph& a, const AttributedGraph& b);

 private:
  AttributedGraph() = default;

  int num_nodes_ = 0;
  std::vector<Edge> edges_;
  Eigen::MatrixXd features_;
  Eigen::MatrixXd sensitive_;
  std::vector<int> labels_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> sensitive_names_;
  std::vector<int64_t> node_ids_;
};

// Reads the three-file CSV schema (features, edges, labels). Sensitive
// columns are moved out of the feature matrix in the order given; node ids
// are densely remapped in ascending id order.
absl::StatusOr<AttributedGraph> LoadGraph(
    const std::string& features_path, const std::string& edges_path,
    const std::string& labels_path,
    const std::vector<std::string>& sensitive_columns);

// Writes features.csv (features followed by the sensitive columns),
// edges.csv, and labels.csv into `directory`.
absl::Status SaveGraph(const AttributedGraph& graph,
                       const std::string& directory);

// Train/validation/test node indices, each sorted ascending.
struct DataSplit {
  std::vector<int> train;
  std::vector<int> val;
  std::vector<int> test;
};

absl::Status ValidateSplit(const DataSplit& split, int num_nodes);

// Label-stratified split. Per class, part sizes follow the largest-remainder
// apportionment of the class count; every class with at least three members
// is present in every part. Deterministic in `seed`.
absl::StatusOr<DataSplit> SplitStratified(const AttributedGraph& graph,
                                          std::array<double, 3> ratios,
                                          uint64_t seed);

// Symmetric normalization D^{-1/2} (A_w [+ I]) D^{-1/2}. Self-loops carry
// weight 1. Without self-loops, isolated nodes get an all-zero row. Weights,
// when given, are indexed like `edges` and must lie in (0, 1].
absl::StatusOr<SparseMatrix> NormalizedAdjacency(
    int num_nodes, std::span<const Edge> edges,
    std::optional<std::span<const double>> edge_weights, bool add_self_loops);

// Row-normalized neighbor averaging operator (no self-loops); rows of
// isolated nodes are zero.
SparseMatrix NeighborMeanOperator(int num_nodes, std::span<const Edge> edges);

// (1 + eps) I + A, the GIN aggregation operator.
SparseMatrix GinAggregationOperator(int num_nodes, std::span<const Edge> edges,
                                    double eps);

}  // namespace fairgraph

#endif  // FAIRGRAPH_GRAPH_H_
