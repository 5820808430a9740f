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

#include "fairgraph/graph.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "fairgraph/csv.h"
#include "fairgraph/status_macros.h"

namespace fairgraph {
namespace {

bool SameMatrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

std::vector<Eigen::Triplet<double>> SymmetricTriplets(
    std::span<const Edge> edges, std::span<const double> values) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges.size());
  for (size_t e = 0; e < edges.size(); ++e) {
    triplets.emplace_back(edges[e].u, edges[e].v, values[e]);
    triplets.emplace_back(edges[e].v, edges[e].u, values[e]);
  }
  return triplets;
}

}  // namespace

std::vector<Edge> CanonicalizeEdges(std::vector<Edge> edges) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u == e.v) continue;
    out.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

absl::StatusOr<AttributedGraph> AttributedGraph::Create(
    int num_nodes, std::vector<Edge> edges, Eigen::MatrixXd features,
    Eigen::MatrixXd sensitive, std::vector<int> labels,
    std::vector<std::string> feature_names,
    std::vector<std::string> sensitive_names, std::vector<int64_t> node_ids) {
  if (num_nodes < 1) {
    return absl::InvalidArgumentError("graph needs at least one node");
  }
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= num_nodes || e.v >= num_nodes) {
      return absl::InvalidArgumentError(absl::StrCat(
          "edge (", e.u, ", ", e.v, ") has an endpoint outside [0, ",
          num_nodes, ")"));
    }
    if (e.u == e.v) {
      return absl::InvalidArgumentError(
          absl::StrCat("self-loop on node ", e.u));
    }
  }
  if (features.rows() != num_nodes || features.cols() < 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "feature matrix must be ", num_nodes, " x d with d >= 1, got ",
        features.rows(), " x ", features.cols()));
  }
  if (!features.allFinite()) {
    return absl::InvalidArgumentError("feature matrix has non-finite entries");
  }
  if (static_cast<int>(feature_names.size()) != features.cols()) {
    return absl::InvalidArgumentError(
        "feature_names length must equal the feature count");
  }
  if (sensitive.rows() != num_nodes || sensitive.cols() < 1) {
    return absl::InvalidArgumentError(
        "sensitive matrix must be n x k with k >= 1");
  }
  for (Eigen::Index i = 0; i < sensitive.rows(); ++i) {
    for (Eigen::Index j = 0; j < sensitive.cols(); ++j) {
      const double s = sensitive(i, j);
      if (s != 0.0 && s != 1.0) {
        return absl::InvalidArgumentError(absl::StrCat(
            "sensitive value ", s, " at node ", i, " column ", j,
            " is not binary"));
      }
    }
  }
  if (sensitive_names.empty()) {
    for (Eigen::Index j = 0; j < sensitive.cols(); ++j) {
      sensitive_names.push_back(absl::StrCat("s", j));
    }
  }
  if (static_cast<int>(sensitive_names.size()) != sensitive.cols()) {
    return absl::InvalidArgumentError(
        "sensitive_names length must equal the sensitive column count");
  }
  if (static_cast<int>(labels.size()) != num_nodes) {
    return absl::InvalidArgumentError("one label per node is required");
  }
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          "label ", labels[i], " at node ", i, " is not binary"));
    }
  }
  if (node_ids.empty()) {
    node_ids.resize(num_nodes);
    std::iota(node_ids.begin(), node_ids.end(), int64_t{0});
  }
  if (static_cast<int>(node_ids.size()) != num_nodes) {
    return absl::InvalidArgumentError("one node id per node is required");
  }

  AttributedGraph g;
  g.num_nodes_ = num_nodes;
  g.edges_ = CanonicalizeEdges(std::move(edges));
  g.features_ = std::move(features);
  g.sensitive_ = std::move(sensitive);
  g.labels_ = std::move(labels);
  g.feature_names_ = std::move(feature_names);
  g.sensitive_names_ = std::move(sensitive_names);
  g.node_ids_ = std::move(node_ids);
  return g;
}

Eigen::VectorXd AttributedGraph::labels_as_vector() const {
  Eigen::VectorXd y(num_nodes_);
  for (int i = 0; i < num_nodes_; ++i) y(i) = labels_[i];
  return y;
}

absl::StatusOr<AttributedGraph> AttributedGraph::WithFeatures(
    Eigen::MatrixXd features, std::vector<std::string> names) const {
  return Create(num_nodes_, edges_, std::move(features), sensitive_, labels_,
                std::move(names), sensitive_names_, node_ids_);
}

absl::StatusOr<AttributedGraph> AttributedGraph::WithEdges(
    std::vector<Edge> edges) const {
  return Create(num_nodes_, std::move(edges), features_, sensitive_, labels_,
                feature_names_, sensitive_names_, node_ids_);
}

bool operator==(const AttributedGraph& a, const AttributedGraph& b) {
  return a.num_nodes_ == b.num_nodes_ && a.edges_ == b.edges_ &&
         SameMatrix(a.features_, b.features_) &&
         SameMatrix(a.sensitive_, b.sensitive_) && a.labels_ == b.labels_ &&
         a.feature_names_ == b.feature_names_ &&
         a.sensitive_names_ == b.sensitive_names_ &&
         a.node_ids_ == b.node_ids_;
}

absl::StatusOr<AttributedGraph> LoadGraph(
    const std::string& features_path, const std::string& edges_path,
    const std::string& labels_path,
    const std::vector<std::string>& sensitive_columns) {
  FG_ASSIGN_OR_RETURN(CsvTable features, ReadCsv(features_path));
  FG_ASSIGN_OR_RETURN(CsvTable edges, ReadCsv(edges_path));
  FG_ASSIGN_OR_RETURN(CsvTable labels, ReadCsv(labels_path));

  if (features.header.empty() || features.header[0] != "node_id") {
    return absl::InvalidArgumentError(
        absl::StrCat(features_path, ": first column must be node_id"));
  }
  if (edges.header != std::vector<std::string>{"src", "dst"}) {
    return absl::InvalidArgumentError(
        absl::StrCat(edges_path, ": header must be src,dst"));
  }
  if (labels.header != std::vector<std::string>{"node_id", "label"}) {
    return absl::InvalidArgumentError(
        absl::StrCat(labels_path, ": header must be node_id,label"));
  }

  // Locate sensitive columns; everything else is a non-sensitive feature.
  std::vector<int> sensitive_index;
  for (const std::string& name : sensitive_columns) {
    auto it = std::find(features.header.begin() + 1, features.header.end(),
                        name);
    if (it == features.header.end()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "sensitive column '", name, "' is not a feature column of ",
          features_path));
    }
    sensitive_index.push_back(
        static_cast<int>(std::distance(features.header.begin(), it)));
  }
  if (sensitive_index.empty()) {
    return absl::FailedPreconditionError(
        "at least one sensitive column is required");
  }
  std::vector<int> feature_index;
  std::vector<std::string> feature_names;
  for (int c = 1; c < static_cast<int>(features.header.size()); ++c) {
    if (std::find(sensitive_index.begin(), sensitive_index.end(), c) ==
        sensitive_index.end()) {
      feature_index.push_back(c);
      feature_names.push_back(features.header[c]);
    }
  }

  // Dense remapping in ascending id order.
  std::vector<int64_t> ids;
  ids.reserve(features.rows.size());
  for (size_t r = 0; r < features.rows.size(); ++r) {
    FG_ASSIGN_OR_RETURN(long long id,
                        ParseCsvInt(features.rows[r][0], features_path,
                                    features.line_numbers[r]));
    ids.push_back(id);
  }
  std::vector<int64_t> sorted_ids = ids;
  std::sort(sorted_ids.begin(), sorted_ids.end());
  if (std::adjacent_find(sorted_ids.begin(), sorted_ids.end()) !=
      sorted_ids.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat(features_path, ": duplicate node_id"));
  }
  std::unordered_map<int64_t, int> dense;
  for (size_t i = 0; i < sorted_ids.size(); ++i) {
    dense[sorted_ids[i]] = static_cast<int>(i);
  }
  const int n = static_cast<int>(sorted_ids.size());

  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(feature_index.size()));
  Eigen::MatrixXd s(n, static_cast<Eigen::Index>(sensitive_index.size()));
  for (size_t r = 0; r < features.rows.size(); ++r) {
    const int node = dense[ids[r]];
    const int line = features.line_numbers[r];
    for (size_t c = 0; c < feature_index.size(); ++c) {
      FG_ASSIGN_OR_RETURN(
          x(node, c),
          ParseCsvDouble(features.rows[r][feature_index[c]], features_path,
                         line));
    }
    for (size_t c = 0; c < sensitive_index.size(); ++c) {
      FG_ASSIGN_OR_RETURN(
          s(node, c),
          ParseCsvDouble(features.rows[r][sensitive_index[c]], features_path,
                         line));
      if (s(node, c) != 0.0 && s(node, c) != 1.0) {
        return absl::InvalidArgumentError(absl::StrCat(
            features_path, ":", line, ": sensitive column '",
            sensitive_columns[c], "' has non-binary value ",
            features.rows[r][sensitive_index[c]]));
      }
    }
  }

  std::vector<int> y(n, -1);
  for (size_t r = 0; r < labels.rows.size(); ++r) {
    const int line = labels.line_numbers[r];
    FG_ASSIGN_OR_RETURN(long long id,
                        ParseCsvInt(labels.rows[r][0], labels_path, line));
    FG_ASSIGN_OR_RETURN(long long label,
                        ParseCsvInt(labels.rows[r][1], labels_path, line));
    auto it = dense.find(id);
    if (it == dense.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          labels_path, ":", line, ": unknown node_id ", id));
    }
    if (label != 0 && label != 1) {
      return absl::InvalidArgumentError(absl::StrCat(
          labels_path, ":", line, ": label ", label, " is not binary"));
    }
    y[it->second] = static_cast<int>(label);
  }
  for (int i = 0; i < n; ++i) {
    if (y[i] < 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          labels_path, ": no label for node_id ", sorted_ids[i]));
    }
  }

  std::vector<Edge> edge_list;
  edge_list.reserve(edges.rows.size());
  for (size_t r = 0; r < edges.rows.size(); ++r) {
    const int line = edges.line_numbers[r];
    FG_ASSIGN_OR_RETURN(long long src,
                        ParseCsvInt(edges.rows[r][0], edges_path, line));
    FG_ASSIGN_OR_RETURN(long long dst,
                        ParseCsvInt(edges.rows[r][1], edges_path, line));
    auto a = dense.find(src);
    auto b = dense.find(dst);
    if (a == dense.end() || b == dense.end()) {
      return absl::InvalidArgumentError(absl::StrCat(
          edges_path, ":", line, ": edge references unknown node_id"));
    }
    edge_list.push_back({a->second, b->second});
  }

  std::vector<std::string> sensitive_names(sensitive_columns.begin(),
                                           sensitive_columns.end());
  return AttributedGraph::Create(n, CanonicalizeEdges(std::move(edge_list)),
                                 std::move(x), std::move(s), std::move(y),
                                 std::move(feature_names),
                                 std::move(sensitive_names),
                                 std::move(sorted_ids));
}

absl::Status SaveGraph(const AttributedGraph& graph,
                       const std::string& directory) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) {
    return absl::InternalError(
        absl::StrCat("cannot create ", directory, ": ", ec.message()));
  }
  const auto& ids = graph.node_ids();

  std::string features = "node_id";
  for (const auto& name : graph.feature_names()) absl::StrAppend(&features, ",", name);
  for (const auto& name : graph.sensitive_names()) absl::StrAppend(&features, ",", name);
  features += "\n";
  for (int i = 0; i < graph.num_nodes(); ++i) {
    absl::StrAppend(&features, ids[i]);
    for (int c = 0; c < graph.num_features(); ++c) {
      absl::StrAppend(&features, ",", FormatShortest(graph.features()(i, c)));
    }
    for (int c = 0; c < graph.num_sensitive(); ++c) {
      absl::StrAppend(&features, ",", FormatShortest(graph.sensitive()(i, c)));
    }
    features += "\n";
  }

  std::string edges = "src,dst\n";
  for (const Edge& e : graph.edges()) {
    absl::StrAppend(&edges, ids[e.u], ",", ids[e.v], "\n");
  }

  std::string labels = "node_id,label\n";
  for (int i = 0; i < graph.num_nodes(); ++i) {
    absl::StrAppend(&labels, ids[i], ",", graph.labels()[i], "\n");
  }

  const std::filesystem::path dir(directory);
  FG_RETURN_IF_ERROR(WriteFileAtomically((dir / "features.csv").string(), features));
  FG_RETURN_IF_ERROR(WriteFileAtomically((dir / "edges.csv").string(), edges));
  FG_RETURN_IF_ERROR(WriteFileAtomically((dir / "labels.csv").string(), labels));
  return absl::OkStatus();
}

absl::Status ValidateSplit(const DataSplit& split, int num_nodes) {
  std::vector<char> seen(num_nodes, 0);
  for (const auto* part : {&split.train, &split.val, &split.test}) {
    if (part->empty()) {
      return absl::InvalidArgumentError("every split part must be nonempty");
    }
    if (!std::is_sorted(part->begin(), part->end())) {
      return absl::InvalidArgumentError("split parts must be sorted");
    }
    for (int i : *part) {
      if (i < 0 || i >= num_nodes) {
        return absl::InvalidArgumentError(
            absl::StrCat("split index ", i, " out of range"));
      }
      if (seen[i]) {
        return absl::InvalidArgumentError(
            absl::StrCat("node ", i, " appears in two split parts"));
      }
      seen[i] = 1;
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<DataSplit> SplitStratified(const AttributedGraph& graph,
                                          std::array<double, 3> ratios,
                                          uint64_t seed) {
  const double total = ratios[0] + ratios[1] + ratios[2];
  for (double r : ratios) {
    if (!(r > 0.0)) {
      return absl::InvalidArgumentError(
          "split ratios must all be positive (every part nonempty)");
    }
  }
  if (total > 1.0 + 1e-12) {
    return absl::InvalidArgumentError("split ratios must sum to at most 1");
  }

  std::array<std::vector<int>, 2> by_class;
  for (int i = 0; i < graph.num_nodes(); ++i) {
    by_class[graph.labels()[i]].push_back(i);
  }

  DataSplit split;
  std::mt19937_64 rng(seed);
  for (auto& members : by_class) {
    const int count = static_cast<int>(members.size());
    if (count == 0) continue;
    std::shuffle(members.begin(), members.end(), rng);

    // Largest-remainder apportionment of round(total * count) nodes.
    const int take = std::min(
        count, static_cast<int>(std::lround(total * count)));
    std::array<double, 3> ideal;
    std::array<int, 3> sizes;
    int assigned = 0;
    for (int p = 0; p < 3; ++p) {
      ideal[p] = ratios[p] / total * take;
      sizes[p] = static_cast<int>(std::floor(ideal[p]));
      assigned += sizes[p];
    }
    std::array<int, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return ideal[a] - sizes[a] > ideal[b] - sizes[b];
    });
    for (int k = 0; assigned < take; k = (k + 1) % 3, ++assigned) {
      ++sizes[order[k]];
    }
    // A class that can appear in every part must appear in every part.
    if (count >= 3) {
      for (int p = 0; p < 3; ++p) {
        if (sizes[p] > 0) continue;
        const int donor = static_cast<int>(
            std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
        if (sizes[donor] > 1) {
          --sizes[donor];
          ++sizes[p];
        } else if (assigned < count) {
          ++sizes[p];
          ++assigned;
        }
      }
    }
    auto it = members.begin();
    split.train.insert(split.train.end(), it, it + sizes[0]);
    it += sizes[0];
    split.val.insert(split.val.end(), it, it + sizes[1]);
    it += sizes[1];
    split.test.insert(split.test.end(), it, it + sizes[2]);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.test.begin(), split.test.end());
  if (split.train.empty() || split.val.empty() || split.test.empty()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "cannot stratify ", graph.num_nodes(),
        " nodes into three nonempty parts"));
  }
  return split;
}

absl::StatusOr<SparseMatrix> NormalizedAdjacency(
    int num_nodes, std::span<const Edge> edges,
    std::optional<std::span<const double>> edge_weights,
    bool add_self_loops) {
  std::vector<double> weights(edges.size(), 1.0);
  if (edge_weights.has_value()) {
    if (edge_weights->size() != edges.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "expected ", edges.size(), " edge weights, got ",
          edge_weights->size()));
    }
    for (size_t e = 0; e < edges.size(); ++e) {
      const double w = (*edge_weights)[e];
      if (!(w > 0.0 && w <= 1.0)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "edge weight ", w, " for edge ", e, " is outside (0, 1]"));
      }
      weights[e] = w;
    }
  }
  Eigen::VectorXd degree =
      Eigen::VectorXd::Constant(num_nodes, add_self_loops ? 1.0 : 0.0);
  for (size_t e = 0; e < edges.size(); ++e) {
    degree(edges[e].u) += weights[e];
    degree(edges[e].v) += weights[e];
  }
  Eigen::VectorXd inv_sqrt(num_nodes);
  for (int i = 0; i < num_nodes; ++i) {
    inv_sqrt(i) = degree(i) > 0.0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
  }
  std::vector<double> values(edges.size());
  for (size_t e = 0; e < edges.size(); ++e) {
    values[e] = weights[e] * inv_sqrt(edges[e].u) * inv_sqrt(edges[e].v);
  }
  auto triplets = SymmetricTriplets(edges, values);
  if (add_self_loops) {
    for (int i = 0; i < num_nodes; ++i) {
      triplets.emplace_back(i, i, inv_sqrt(i) * inv_sqrt(i));
    }
  }
  SparseMatrix m(num_nodes, num_nodes);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SparseMatrix NeighborMeanOperator(int num_nodes, std::span<const Edge> edges) {
  std::vector<int> degree(num_nodes, 0);
  for (const Edge& e : edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges.size());
  for (const Edge& e : edges) {
    triplets.emplace_back(e.u, e.v, 1.0 / degree[e.u]);
    triplets.emplace_back(e.v, e.u, 1.0 / degree[e.v]);
  }
  SparseMatrix m(num_nodes, num_nodes);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SparseMatrix GinAggregationOperator(int num_nodes, std::span<const Edge> edges,
                                    double eps) {
  std::vector<double> ones(edges.size(), 1.0);
  auto triplets = SymmetricTriplets(edges, ones);
  for (int i = 0; i < num_nodes; ++i) triplets.emplace_back(i, i, 1.0 + eps);
  SparseMatrix m(num_nodes, num_nodes);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace fairgraph
