//------------------------------------------------------------------------------
//
//   Copyright 2026 The invnet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include "invnet/core_model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace invnet {

struct BipartiteEdge
{
  std::size_t investor{0};
  std::size_t initiator{0};

  auto operator<=>(BipartiteEdge const &) const = default;
};

/// Investor-initiator graph. A link means a strictly positive decision weight.
struct BipartiteGraph
{
  std::size_t                investor_count{0};
  std::size_t                initiator_count{0};
  std::vector<BipartiteEdge> edges;

  std::size_t node_count() const
  {
    return investor_count + initiator_count;
  }
};

BipartiteGraph build_graph(WeightMatrix const &weights);

/// Same thresholding applied to a stored edge list (edges with w <= 0 are dropped,
/// duplicates collapse). Throws ContractError on out-of-range endpoints.
BipartiteGraph build_graph(std::size_t investors, std::size_t initiators,
                           std::span<WeightedEdge const> edges);

std::size_t count_links(BipartiteGraph const &graph);
std::size_t max_degree(BipartiteGraph const &graph);
double      average_degree(BipartiteGraph const &graph);

/// Degrees of all nodes: investors first, then initiators.
std::vector<std::size_t> degrees(BipartiteGraph const &graph);

/// Undirected simple graph stored as sorted adjacency lists.
class Graph
{
public:
  explicit Graph(std::size_t nodes = 0);

  /// Takes symmetric, sorted, duplicate-free adjacency lists as they are.
  explicit Graph(std::vector<std::vector<std::uint32_t>> sorted_lists);

  /// Ignores self loops and repeated edges.
  void add_edge(std::size_t u, std::size_t v);

  std::size_t size() const
  {
    return adjacency_.size();
  }
  std::span<std::uint32_t const> neighbors(std::size_t v) const
  {
    return adjacency_[v];
  }
  std::size_t degree(std::size_t v) const
  {
    return adjacency_[v].size();
  }
  bool has_edge(std::size_t u, std::size_t v) const;

private:
  std::vector<std::vector<std::uint32_t>> adjacency_;
};

/// Node ids: investor k -> k, initiator j -> investor_count + j.
Graph to_graph(BipartiteGraph const &graph);

/// Undirected graph on a bit matrix; used for the investor projection, which
/// is typically close to complete.
class DenseGraph
{
public:
  explicit DenseGraph(std::size_t nodes = 0);

  void add_edge(std::size_t u, std::size_t v);
  bool has_edge(std::size_t u, std::size_t v) const;

  std::size_t size() const
  {
    return nodes_;
  }
  std::size_t degree(std::size_t v) const;
  std::size_t edge_count() const;

  std::span<std::uint64_t const> row(std::size_t v) const
  {
    return {bits_.data() + v * words_, words_};
  }

private:
  std::size_t                nodes_{0};
  std::size_t                words_{0};
  std::vector<std::uint64_t> bits_;
};

/// Mean BFS distance over unordered node pairs that are connected. Pairs in
/// different components are left out; absent when no pair is connected.
std::optional<double> average_path_length(Graph const &graph);
std::optional<double> average_path_length(BipartiteGraph const &graph);

/// c_v = triangles(v) / (deg_v (deg_v - 1) / 2), 0 when deg_v < 2.
std::vector<double> local_clustering(Graph const &graph);
std::vector<double> local_clustering(DenseGraph const &graph);

/// Mean local clustering over every node of the graph (0 for an empty graph).
double average_clustering(Graph const &graph);

/// Clustering of the raw two-mode graph. Always 0: a bipartite graph has no
/// odd cycles. Computed, not assumed.
double clustering_coefficient(BipartiteGraph const &graph);

/// Investors become adjacent when they share at least one initiator.
DenseGraph project_onto_investors(BipartiteGraph const &graph);

/// Mean local clustering over all nodes of a one-mode graph.
double clustering_projected(DenseGraph const &graph);

struct RandomBaselines
{
  std::optional<double> path_length;  // ln(n) / ln(<k>), absent unless <k> > 1
  double                clustering{0.0};  // <k> / n
};

RandomBaselines random_baselines(double node_count, double avg_degree);

struct NetworkMetrics
{
  std::size_t           links{0};
  std::size_t           max_degree{0};
  double                average_degree{0.0};
  std::optional<double> avg_path_length;
  double                clustering_bipartite{0.0};
  double                clustering_projected{0.0};
  std::optional<double> l_rand;
  double                c_rand{0.0};
};

/// Every network statistic for one graph. Baselines use all N + J nodes.
NetworkMetrics measure_network(BipartiteGraph const &graph);

struct RankedValue
{
  std::size_t rank{1};
  double      value{0.0};

  bool operator==(RankedValue const &) const = default;
};

/// Descending order, ranks from 1; ties keep their input order.
std::vector<RankedValue> rank_size(std::span<double const> values);

struct TailFit
{
  double      slope{0.0};
  double      intercept{0.0};
  double      r_squared{0.0};
  double      tail_fraction{1.0};
  std::size_t points_used{0};
};

constexpr double default_tail_fraction = 0.1;

/// Least-squares line through (ln rank, ln value) over the largest
/// ceil(tail_fraction * n) values. Throws ContractError when values are not
/// positive, tail_fraction is outside (0,1], or fewer than 2 points remain.
TailFit powerlaw_tail_slope(std::span<double const> values,
                            double                  tail_fraction = default_tail_fraction);

constexpr std::size_t default_histogram_bins = 50;

/// bins + 1 logarithmically spaced edges from lo to hi (lo > 0). A degenerate
/// range lo == hi is widened by 1% on both sides.
std::vector<double> log_spaced_edges(double lo, double hi,
                                     std::size_t bins = default_histogram_bins);

struct Histogram
{
  std::vector<double> edges;
  std::vector<double> mass;  // fractions; sums to 1 unless there was no data
};

/// Normalised counts. Values outside the edges are clamped into the end bins.
Histogram histogram(std::span<double const> values, std::span<double const> edges);

/// L1 distance between two histograms on identical edges, in [0, 2].
double stationarity_distance(Histogram const &a, Histogram const &b);

}  // namespace invnet
