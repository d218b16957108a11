// Copyright 2026 The knng Authors
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

// Watts-Strogatz clustering coefficient of a directed graph, taken on its
// symmetrization: {u, v} is an undirected edge iff u->v or v->u exists.
//
//   C_v = (# connected pairs among v's neighbors) / (k_v (k_v - 1) / 2)
//
// with C_v = 0 when k_v < 2. The global coefficient is the mean over all n
// vertices, degree-0 and degree-1 vertices included.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "knng/graph.hpp"
#include "knng/parallel.hpp"

namespace knng {

using UndirectedAdjacency = std::vector<std::vector<VertexId>>;

/// Sorted, duplicate-free undirected neighbor lists.
inline UndirectedAdjacency symmetrize(const KnnGraph& g) {
  UndirectedAdjacency sym(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    for (VertexId u : g.neighbors(static_cast<VertexId>(v))) {
      sym[v].push_back(u);
      sym[u].push_back(static_cast<VertexId>(v));
    }
  }
  for (auto& list : sym) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return sym;
}

namespace detail {

inline double clustering_ratio(std::size_t links, std::size_t degree) {
  if (degree < 2) return 0.0;
  const double pairs = static_cast<double>(degree) * static_cast<double>(degree - 1) / 2.0;
  return static_cast<double>(links) / pairs;
}

}  // namespace detail

/// Local coefficient on an already symmetrized graph. `marker` is scratch
/// space of size n, all zero on entry and on exit.
inline double local_clustering(const UndirectedAdjacency& sym, VertexId v, std::vector<std::uint8_t>& marker) {
  const auto& nbrs = sym[v];
  if (nbrs.size() < 2) return 0.0;
  for (VertexId u : nbrs) marker[u] = 1;
  std::size_t twice_links = 0;
  for (VertexId a : nbrs) {
    for (VertexId b : sym[a]) twice_links += marker[b];
  }
  for (VertexId u : nbrs) marker[u] = 0;
  return detail::clustering_ratio(twice_links / 2, nbrs.size());
}

/// Local coefficient of one vertex, symmetrizing on the fly (O(E) for the
/// in-neighbor scan). Use clustering_report for whole graphs.
inline double local_clustering(const KnnGraph& g, VertexId v) {
  if (v >= g.size()) throw InvalidArgument("vertex " + std::to_string(v) + " out of range");
  std::vector<VertexId> nbrs(g.neighbors(v).begin(), g.neighbors(v).end());
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (u != v && g.has_edge(static_cast<VertexId>(u), v)) nbrs.push_back(static_cast<VertexId>(u));
  }
  std::sort(nbrs.begin(), nbrs.end());
  nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());

  std::size_t links = 0;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
      if (g.has_edge(nbrs[i], nbrs[j]) || g.has_edge(nbrs[j], nbrs[i])) ++links;
    }
  }
  return detail::clustering_ratio(links, nbrs.size());
}

struct ClusteringReport {
  std::vector<double> per_vertex;
  double global = 0.0;
  std::size_t K = 0;
  EdgeStrategy strategy = EdgeStrategy::DirectedKnn;
};

inline ClusteringReport clustering_report(const KnnGraph& g, std::size_t threads = 0) {
  ClusteringReport report;
  report.K = g.params().K;
  report.strategy = g.strategy();
  if (g.empty()) throw InvalidArgument("clustering coefficient of an empty graph");

  const auto sym = symmetrize(g);
  report.per_vertex.assign(g.size(), 0.0);
  const std::size_t workers = threads == 0 ? default_thread_count() : threads;
  const std::size_t chunks = std::min(workers * 4, g.size());
  const std::size_t chunk_size = (g.size() + chunks - 1) / chunks;
  parallel_for(chunks, workers, [&](std::size_t c) {
    std::vector<std::uint8_t> marker(g.size(), 0);
    const std::size_t end = std::min(g.size(), (c + 1) * chunk_size);
    for (std::size_t v = c * chunk_size; v < end; ++v) {
      report.per_vertex[v] = local_clustering(sym, static_cast<VertexId>(v), marker);
    }
  });

  double sum = 0.0;
  for (double c : report.per_vertex) sum += c;
  report.global = sum / static_cast<double>(g.size());
  return report;
}

inline double global_clustering(const KnnGraph& g, std::size_t threads = 0) {
  return clustering_report(g, threads).global;
}

}  // namespace knng
