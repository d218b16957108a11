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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "knng/dataset.hpp"
#include "knng/graph.hpp"

namespace knng {

/// Induced subgraph over a vertex subset. Edges are kept with their direction
/// and stored in local indices (positions in `vertices`).
struct Subgraph {
  std::vector<VertexId> vertices;
  std::vector<std::vector<std::uint32_t>> local_adjacency;

  std::size_t size() const noexcept { return vertices.size(); }

  /// Edges in global ids, ordered by source position then target position.
  std::vector<std::pair<VertexId, VertexId>> edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      for (auto j : local_adjacency[i]) out.emplace_back(vertices[i], vertices[j]);
    }
    return out;
  }
};

inline Subgraph induced_subgraph(const KnnGraph& g, std::span<const VertexId> vertices) {
  Subgraph sub;
  sub.vertices.assign(vertices.begin(), vertices.end());
  std::unordered_map<VertexId, std::uint32_t> local;
  local.reserve(vertices.size() * 2);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] >= g.size()) throw InvalidArgument("subgraph vertex out of range");
    if (!local.emplace(vertices[i], static_cast<std::uint32_t>(i)).second) {
      throw InvalidArgument("duplicate subgraph vertex " + std::to_string(vertices[i]));
    }
  }
  sub.local_adjacency.resize(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (VertexId u : g.neighbors(vertices[i])) {
      if (auto it = local.find(u); it != local.end()) sub.local_adjacency[i].push_back(it->second);
    }
    std::sort(sub.local_adjacency[i].begin(), sub.local_adjacency[i].end());
  }
  return sub;
}

/// Subgraph induced by the exact k nearest neighbors of an arbitrary point q
/// (which need not belong to the dataset), nearest first.
inline Subgraph neighborhood_subgraph(const KnnGraph& g, const VectorDataset& data, std::span<const float> q,
                                      std::size_t k) {
  if (g.size() != data.size()) throw InvalidArgument("graph and dataset sizes differ");
  const auto ids = ids_of(brute_force_knn(data, q, k));
  return induced_subgraph(g, ids);
}

/// Same for a dataset member, which is excluded from its own neighborhood.
inline Subgraph neighborhood_subgraph(const KnnGraph& g, const VectorDataset& data, VertexId v, std::size_t k) {
  if (g.size() != data.size()) throw InvalidArgument("graph and dataset sizes differ");
  const auto ids = ids_of(brute_force_knn(data, v, k));
  return induced_subgraph(g, ids);
}

/// Tarjan's algorithm, iterative. Returns the component index of every vertex;
/// indices are assigned in order of completion (reverse topological order).
inline std::vector<std::uint32_t> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& adjacency, std::size_t* component_count = nullptr) {
  constexpr std::uint32_t kUnvisited = 0xFFFFFFFFu;
  const std::size_t n = adjacency.size();
  std::vector<std::uint32_t> index(n, kUnvisited), lowlink(n, 0), component(n, kUnvisited);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::vector<std::pair<std::uint32_t, std::size_t>> call;  // (vertex, next edge position)
  std::uint32_t next_index = 0;
  std::uint32_t components = 0;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;

    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < adjacency[v].size()) {
        const std::uint32_t w = adjacency[v][pos++];
        if (index[w] == kUnvisited) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
        continue;
      }
      const std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) {
        const std::uint32_t parent = call.back().first;
        lowlink[parent] = std::min(lowlink[parent], lowlink[done]);
      }
      if (lowlink[done] == index[done]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          component[w] = components;
        } while (w != done);
        ++components;
      }
    }
  }
  if (component_count) *component_count = components;
  return component;
}

inline bool is_strongly_connected(const KnnGraph& g) {
  std::vector<std::vector<std::uint32_t>> adj(g.adjacency().begin(), g.adjacency().end());
  std::size_t count = 0;
  strongly_connected_components(adj, &count);
  return count == 1;
}

/// SCC decomposition of a k-neighborhood subgraph.
struct SccReport {
  std::size_t k = 0;
  /// Members ascending; components by size descending, ties by smallest member.
  std::vector<std::vector<VertexId>> components;

  /// The maximum strongly connected neighborhood C_k(q).
  const std::vector<VertexId>& max_component() const {
    static const std::vector<VertexId> kEmpty;
    return components.empty() ? kEmpty : components.front();
  }

  /// Size of the component of the given rank (0 = largest); 0 when absent.
  std::size_t size_at(std::size_t rank) const noexcept {
    return rank < components.size() ? components[rank].size() : 0;
  }

  double ratio_at(std::size_t rank) const noexcept {
    return k == 0 ? 0.0 : static_cast<double>(size_at(rank)) / static_cast<double>(k);
  }
};

inline SccReport scc_decompose(const Subgraph& sub) {
  SccReport report;
  report.k = sub.size();
  std::size_t count = 0;
  const auto component = strongly_connected_components(sub.local_adjacency, &count);
  report.components.resize(count);
  for (std::size_t i = 0; i < sub.size(); ++i) report.components[component[i]].push_back(sub.vertices[i]);
  for (auto& c : report.components) std::sort(c.begin(), c.end());
  std::sort(report.components.begin(), report.components.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return report;
}

}  // namespace knng
