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

#include "invnet/net_analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace invnet {
namespace {

std::vector<BipartiteEdge> unique_sorted(std::vector<BipartiteEdge> edges)
{
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

BipartiteGraph build_graph(WeightMatrix const &weights)
{
  BipartiteGraph graph;
  graph.investor_count = weights.investors();
  graph.initiator_count = weights.initiators();
  for (std::size_t k = 0; k < weights.investors(); ++k)
  {
    auto const row = weights.row(k);
    for (std::size_t j = 0; j < row.size(); ++j)
    {
      if (row[j] > 0.0)
      {
        graph.edges.push_back({k, j});
      }
    }
  }
  return graph;
}

BipartiteGraph build_graph(std::size_t investors, std::size_t initiators,
                           std::span<WeightedEdge const> edges)
{
  BipartiteGraph graph;
  graph.investor_count = investors;
  graph.initiator_count = initiators;
  std::vector<BipartiteEdge> kept;
  for (auto const &e : edges)
  {
    if (e.investor >= investors || e.initiator >= initiators)
    {
      throw ContractError("edge endpoint out of range");
    }
    if (e.weight > 0.0)
    {
      kept.push_back({e.investor, e.initiator});
    }
  }
  graph.edges = unique_sorted(std::move(kept));
  return graph;
}

std::size_t count_links(BipartiteGraph const &graph)
{
  return graph.edges.size();
}

std::vector<std::size_t> degrees(BipartiteGraph const &graph)
{
  std::vector<std::size_t> deg(graph.node_count(), 0);
  for (auto const &e : graph.edges)
  {
    ++deg[e.investor];
    ++deg[graph.investor_count + e.initiator];
  }
  return deg;
}

std::size_t max_degree(BipartiteGraph const &graph)
{
  auto const deg = degrees(graph);
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

double average_degree(BipartiteGraph const &graph)
{
  if (graph.node_count() == 0)
  {
    return 0.0;
  }
  return 2.0 * static_cast<double>(graph.edges.size()) / static_cast<double>(graph.node_count());
}

// ---- Graph -----------------------------------------------------------------

Graph::Graph(std::size_t nodes)
  : adjacency_(nodes)
{}

Graph::Graph(std::vector<std::vector<std::uint32_t>> sorted_lists)
  : adjacency_(std::move(sorted_lists))
{}

void Graph::add_edge(std::size_t u, std::size_t v)
{
  if (u >= size() || v >= size())
  {
    throw ContractError("graph node out of range");
  }
  if (u == v)
  {
    return;
  }
  auto insert = [](std::vector<std::uint32_t> &list, std::size_t x) {
    auto const value = static_cast<std::uint32_t>(x);
    auto       it = std::lower_bound(list.begin(), list.end(), value);
    if (it == list.end() || *it != value)
    {
      list.insert(it, value);
    }
  };
  insert(adjacency_[u], v);
  insert(adjacency_[v], u);
}

bool Graph::has_edge(std::size_t u, std::size_t v) const
{
  auto const &list = adjacency_[u];
  return std::binary_search(list.begin(), list.end(), static_cast<std::uint32_t>(v));
}

Graph to_graph(BipartiteGraph const &graph)
{
  std::vector<std::vector<std::uint32_t>> lists(graph.node_count());
  for (auto const &e : graph.edges)
  {
    auto const u = static_cast<std::uint32_t>(e.investor);
    auto const v = static_cast<std::uint32_t>(graph.investor_count + e.initiator);
    lists[u].push_back(v);
    lists[v].push_back(u);
  }
  for (auto &l : lists)
  {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  return Graph{std::move(lists)};
}

// ---- DenseGraph ------------------------------------------------------------

DenseGraph::DenseGraph(std::size_t nodes)
  : nodes_{nodes}
  , words_{(nodes + 63) / 64}
  , bits_(nodes * ((nodes + 63) / 64), 0)
{}

void DenseGraph::add_edge(std::size_t u, std::size_t v)
{
  if (u >= nodes_ || v >= nodes_)
  {
    throw ContractError("graph node out of range");
  }
  if (u == v)
  {
    return;
  }
  bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
  bits_[v * words_ + u / 64] |= std::uint64_t{1} << (u % 64);
}

bool DenseGraph::has_edge(std::size_t u, std::size_t v) const
{
  return (bits_[u * words_ + v / 64] >> (v % 64)) & 1U;
}

std::size_t DenseGraph::degree(std::size_t v) const
{
  std::size_t d = 0;
  for (auto w : row(v))
  {
    d += static_cast<std::size_t>(std::popcount(w));
  }
  return d;
}

std::size_t DenseGraph::edge_count() const
{
  std::size_t twice = 0;
  for (auto w : bits_)
  {
    twice += static_cast<std::size_t>(std::popcount(w));
  }
  return twice / 2;
}

// ---- path length -------------------------------------------------------------

std::optional<double> average_path_length(Graph const &graph)
{
  std::size_t const n = graph.size();
  std::vector<std::uint32_t> dist(n);
  std::vector<std::uint32_t> queue(n);
  constexpr auto unreached = std::numeric_limits<std::uint32_t>::max();

  // ordered pairs; each unordered pair is seen from both ends
  std::uint64_t distance_sum = 0;
  std::uint64_t pair_count = 0;
  for (std::size_t source = 0; source < n; ++source)
  {
    if (graph.degree(source) == 0)
    {
      continue;
    }
    std::fill(dist.begin(), dist.end(), unreached);
    dist[source] = 0;
    std::size_t head = 0;
    std::size_t tail = 0;
    queue[tail++] = static_cast<std::uint32_t>(source);
    while (head < tail)
    {
      auto const u = queue[head++];
      for (auto v : graph.neighbors(u))
      {
        if (dist[v] == unreached)
        {
          dist[v] = dist[u] + 1;
          distance_sum += dist[v];
          ++pair_count;
          queue[tail++] = v;
        }
      }
    }
  }
  if (pair_count == 0)
  {
    return std::nullopt;
  }
  return static_cast<double>(distance_sum) / static_cast<double>(pair_count);
}

std::optional<double> average_path_length(BipartiteGraph const &graph)
{
  return average_path_length(to_graph(graph));
}

// ---- clustering --------------------------------------------------------------

std::vector<double> local_clustering(Graph const &graph)
{
  std::size_t const   n = graph.size();
  std::vector<double> c(n, 0.0);
  std::vector<char>   mark(n, 0);
  for (std::size_t v = 0; v < n; ++v)
  {
    std::size_t const deg = graph.degree(v);
    if (deg < 2)
    {
      continue;
    }
    for (auto u : graph.neighbors(v))
    {
      mark[u] = 1;
    }
    std::uint64_t twice_triangles = 0;
    for (auto u : graph.neighbors(v))
    {
      for (auto w : graph.neighbors(u))
      {
        twice_triangles += mark[w];
      }
    }
    for (auto u : graph.neighbors(v))
    {
      mark[u] = 0;
    }
    c[v] = static_cast<double>(twice_triangles) / static_cast<double>(deg * (deg - 1));
  }
  return c;
}

std::vector<double> local_clustering(DenseGraph const &graph)
{
  std::size_t const          n = graph.size();
  std::vector<std::uint64_t> twice_triangles(n, 0);
  for (std::size_t v = 0; v < n; ++v)
  {
    auto const row_v = graph.row(v);
    // visit each edge (v, u) once, with u > v
    for (std::size_t word = v / 64; word < row_v.size(); ++word)
    {
      std::uint64_t bits = row_v[word];
      if (word == v / 64)
      {
        bits &= ~((std::uint64_t{2} << (v % 64)) - 1);
      }
      while (bits)
      {
        std::size_t const u = word * 64 + static_cast<std::size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        auto const    row_u = graph.row(u);
        std::uint64_t common = 0;
        for (std::size_t i = 0; i < row_v.size(); ++i)
        {
          common += static_cast<std::uint64_t>(std::popcount(row_v[i] & row_u[i]));
        }
        twice_triangles[v] += common;
        twice_triangles[u] += common;
      }
    }
  }
  std::vector<double> c(n, 0.0);
  for (std::size_t v = 0; v < n; ++v)
  {
    std::size_t const deg = graph.degree(v);
    if (deg >= 2)
    {
      c[v] = static_cast<double>(twice_triangles[v]) / static_cast<double>(deg * (deg - 1));
    }
  }
  return c;
}

namespace {

double mean_or_zero(std::vector<double> const &values)
{
  if (values.empty())
  {
    return 0.0;
  }
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace

double average_clustering(Graph const &graph)
{
  return mean_or_zero(local_clustering(graph));
}

double clustering_coefficient(BipartiteGraph const &graph)
{
  return average_clustering(to_graph(graph));
}

DenseGraph project_onto_investors(BipartiteGraph const &graph)
{
  std::vector<std::vector<std::size_t>> members(graph.initiator_count);
  for (auto const &e : graph.edges)
  {
    members[e.initiator].push_back(e.investor);
  }
  DenseGraph projection(graph.investor_count);
  for (auto const &group : members)
  {
    for (std::size_t a = 0; a < group.size(); ++a)
    {
      for (std::size_t b = a + 1; b < group.size(); ++b)
      {
        projection.add_edge(group[a], group[b]);
      }
    }
  }
  return projection;
}

double clustering_projected(DenseGraph const &graph)
{
  return mean_or_zero(local_clustering(graph));
}

RandomBaselines random_baselines(double node_count, double avg_degree)
{
  if (!(node_count >= 1.0) || !std::isfinite(avg_degree) || avg_degree < 0.0)
  {
    throw ContractError("random baselines need node_count >= 1 and a finite degree >= 0");
  }
  RandomBaselines out;
  if (avg_degree > 1.0)
  {
    out.path_length = std::log(node_count) / std::log(avg_degree);
  }
  out.clustering = avg_degree / node_count;
  return out;
}

NetworkMetrics measure_network(BipartiteGraph const &graph)
{
  NetworkMetrics m;
  m.links = count_links(graph);
  m.max_degree = max_degree(graph);
  m.average_degree = average_degree(graph);
  Graph const g = to_graph(graph);
  m.avg_path_length = average_path_length(g);
  m.clustering_bipartite = average_clustering(g);
  m.clustering_projected = clustering_projected(project_onto_investors(graph));
  if (graph.node_count() > 0)
  {
    auto const base = random_baselines(static_cast<double>(graph.node_count()), m.average_degree);
    m.l_rand = base.path_length;
    m.c_rand = base.clustering;
  }
  return m;
}

// ---- distributions ------------------------------------------------------------

std::vector<RankedValue> rank_size(std::span<double const> values)
{
  std::vector<double> sorted(values.begin(), values.end());
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>{});
  std::vector<RankedValue> out;
  out.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
  {
    out.push_back({i + 1, sorted[i]});
  }
  return out;
}

TailFit powerlaw_tail_slope(std::span<double const> values, double tail_fraction)
{
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
  {
    throw ContractError("tail_fraction must lie in (0,1]");
  }
  for (double v : values)
  {
    if (!(v > 0.0) || !std::isfinite(v))
    {
      throw ContractError("power-law fit needs finite positive values");
    }
  }
  auto const  ranked = rank_size(values);
  double const wanted = std::ceil(tail_fraction * static_cast<double>(ranked.size()) - 1e-9);
  std::size_t const m = std::min(ranked.size(), static_cast<std::size_t>(wanted));
  if (m < 2)
  {
    throw ContractError("power-law fit needs at least 2 tail points");
  }

  std::vector<double> xs(m);
  std::vector<double> ys(m);
  for (std::size_t i = 0; i < m; ++i)
  {
    xs[i] = std::log(static_cast<double>(ranked[i].rank));
    ys[i] = std::log(ranked[i].value);
  }
  double const x_mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(m);
  double const y_mean = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < m; ++i)
  {
    double const dx = xs[i] - x_mean;
    double const dy = ys[i] - y_mean;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  TailFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;
  fit.tail_fraction = tail_fraction;
  fit.points_used = m;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < m; ++i)
  {
    double const e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += e * e;
  }
  // a flat tail is fitted perfectly by a flat line
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

std::vector<double> log_spaced_edges(double lo, double hi, std::size_t bins)
{
  if (!(lo > 0.0) || !std::isfinite(hi) || hi < lo || bins == 0)
  {
    throw ContractError("log-spaced bins need 0 < lo <= hi and at least one bin");
  }
  if (lo == hi)
  {
    lo /= 1.01;
    hi *= 1.01;
  }
  double const        a = std::log(lo);
  double const        b = std::log(hi);
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
  {
    edges[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(bins));
  }
  edges.front() = lo;
  edges.back() = hi;
  return edges;
}

Histogram histogram(std::span<double const> values, std::span<double const> edges)
{
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
  {
    throw ContractError("histogram edges must be ascending with at least one bin");
  }
  Histogram h;
  h.edges.assign(edges.begin(), edges.end());
  h.mass.assign(edges.size() - 1, 0.0);
  std::size_t const last = h.mass.size() - 1;
  for (double v : values)
  {
    auto const  it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t bin = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
    h.mass[std::min(bin, last)] += 1.0;
  }
  if (!values.empty())
  {
    for (double &m : h.mass)
    {
      m /= static_cast<double>(values.size());
    }
  }
  return h;
}

double stationarity_distance(Histogram const &a, Histogram const &b)
{
  if (a.edges != b.edges || a.mass.size() != b.mass.size())
  {
    throw ContractError("histograms must share identical bin edges");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.mass.size(); ++i)
  {
    d += std::abs(a.mass[i] - b.mass[i]);
  }
  return d;
}

}  // namespace invnet
