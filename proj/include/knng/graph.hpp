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
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "knng/common.hpp"
#include "knng/dataset.hpp"
#include "knng/parallel.hpp"

namespace knng {

/// How each vertex's exact K nearest neighbors become out-edges.
enum class EdgeStrategy : std::uint16_t {
  DirectedKnn = 0,    ///< v -> each of its K nearest neighbors
  UndirectedKnn = 1,  ///< DirectedKnn plus every reverse edge
  RngPruned = 2,      ///< v -> r unless some candidate lies in lune(v, r)
  MrngPruned = 3,     ///< v -> r unless an already selected neighbor lies in lune(v, r)
};

inline constexpr EdgeStrategy kAllStrategies[] = {EdgeStrategy::DirectedKnn, EdgeStrategy::UndirectedKnn,
                                                   EdgeStrategy::RngPruned, EdgeStrategy::MrngPruned};

inline std::string_view strategy_name(EdgeStrategy s) {
  switch (s) {
    case EdgeStrategy::DirectedKnn: return "directed";
    case EdgeStrategy::UndirectedKnn: return "undirected";
    case EdgeStrategy::RngPruned: return "rng";
    case EdgeStrategy::MrngPruned: return "mrng";
  }
  return "unknown";
}

inline EdgeStrategy parse_strategy(std::string_view name) {
  for (auto s : kAllStrategies) {
    if (name == strategy_name(s)) return s;
  }
  throw InvalidArgument("unknown edge strategy '" + std::string(name) +
                        "' (expected directed, undirected, rng or mrng)");
}

inline constexpr std::size_t kDefaultBuildK = 50;
inline constexpr std::size_t kDefaultModCap = 70;

struct BuildParams {
  std::size_t K = kDefaultBuildK;
  std::optional<std::size_t> mod_cap = kDefaultModCap;  ///< maximum out-degree; nullopt = uncapped

  friend bool operator==(const BuildParams&, const BuildParams&) = default;
};

/// Directed graph over vertices 0..n-1 with sorted, duplicate-free out-lists.
class KnnGraph {
 public:
  KnnGraph() = default;

  /// Takes ownership of `adjacency` and sorts every out-list. Throws
  /// InvalidArgument on self-loops, duplicate edges, out-of-range ids or an
  /// out-degree above the cap.
  KnnGraph(std::vector<std::vector<VertexId>> adjacency, EdgeStrategy strategy, BuildParams params)
      : adjacency_(std::move(adjacency)), strategy_(strategy), params_(params) {
    const std::size_t n = adjacency_.size();
    for (std::size_t v = 0; v < n; ++v) {
      auto& out = adjacency_[v];
      std::sort(out.begin(), out.end());
      if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
        throw InvalidArgument("duplicate out-edge at vertex " + std::to_string(v));
      }
      if (!out.empty() && out.back() >= n) {
        throw InvalidArgument("vertex " + std::to_string(v) + " links to out-of-range id " +
                              std::to_string(out.back()));
      }
      if (std::binary_search(out.begin(), out.end(), static_cast<VertexId>(v))) {
        throw InvalidArgument("self-loop at vertex " + std::to_string(v));
      }
      if (params_.mod_cap && out.size() > *params_.mod_cap) {
        throw InvalidArgument("vertex " + std::to_string(v) + " exceeds out-degree cap");
      }
    }
  }

  std::size_t size() const noexcept { return adjacency_.size(); }
  bool empty() const noexcept { return adjacency_.empty(); }
  EdgeStrategy strategy() const noexcept { return strategy_; }
  const BuildParams& params() const noexcept { return params_; }

  std::span<const VertexId> neighbors(VertexId v) const noexcept { return adjacency_[v]; }
  const std::vector<std::vector<VertexId>>& adjacency() const noexcept { return adjacency_; }

  bool has_edge(VertexId from, VertexId to) const {
    const auto& out = adjacency_[from];
    return std::binary_search(out.begin(), out.end(), to);
  }

  std::size_t edge_count() const noexcept {
    std::size_t e = 0;
    for (const auto& out : adjacency_) e += out.size();
    return e;
  }

  double mean_out_degree() const noexcept {
    return adjacency_.empty() ? 0.0 : static_cast<double>(edge_count()) / static_cast<double>(size());
  }

  friend bool operator==(const KnnGraph&, const KnnGraph&) = default;

 private:
  std::vector<std::vector<VertexId>> adjacency_;
  EdgeStrategy strategy_ = EdgeStrategy::DirectedKnn;
  BuildParams params_;
};

namespace detail {

inline void check_candidates(std::span<const Neighbor> candidates, const VectorDataset& data, VertexId v) {
  if (v >= data.size()) throw InvalidArgument("pruned vertex out of range");
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].id >= data.size()) throw InvalidArgument("candidate id out of range");
    if (i > 0 && candidates[i].distance < candidates[i - 1].distance) {
      throw InvalidArgument("candidates must be sorted ascending by distance");
    }
  }
}

// u lies in the open lune of (v, r): strictly closer to both v and r than r is to v.
inline bool in_lune(const VectorDataset& data, const Neighbor& u, const Neighbor& r) {
  if (!(u.distance < r.distance)) return false;
  return squared_l2(data[u.id].data(), data[r.id].data(), data.dim()) < r.distance;
}

}  // namespace detail

/// Relative-neighborhood selection: keeps r iff no other candidate lies in the
/// open lune of (v, r). Boundary ties keep the edge.
inline NeighborList rng_prune(std::span<const Neighbor> candidates, const VectorDataset& data, VertexId v) {
  detail::check_candidates(candidates, data, v);
  NeighborList kept;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    bool occluded = false;
    // Only strictly closer candidates can be in the lune; they precede r.
    for (std::size_t j = 0; j < i && !occluded; ++j) occluded = detail::in_lune(data, candidates[j], candidates[i]);
    if (!occluded) kept.push_back(candidates[i]);
  }
  return kept;
}

/// Monotonic relative-neighborhood selection: like rng_prune, but only
/// neighbors already selected can occlude a later candidate.
inline NeighborList mrng_prune(std::span<const Neighbor> candidates, const VectorDataset& data, VertexId v) {
  detail::check_candidates(candidates, data, v);
  NeighborList kept;
  for (const auto& r : candidates) {
    const bool occluded =
        std::any_of(kept.begin(), kept.end(), [&](const Neighbor& u) { return detail::in_lune(data, u, r); });
    if (!occluded) kept.push_back(r);
  }
  return kept;
}

/// Graph construction from precomputed exact neighbor lists. `table[v]` must hold
/// at least K entries; the first K are used.
inline KnnGraph build_graph(const VectorDataset& data, const KnnTable& table, std::size_t K, EdgeStrategy strategy,
                            std::optional<std::size_t> mod_cap, std::size_t threads = 0) {
  const std::size_t n = data.size();
  if (K == 0 || K + 1 > n) {
    throw InvalidArgument("K=" + std::to_string(K) + " outside [1, " + std::to_string(n - 1) + "]");
  }
  if (table.size() != n) throw InvalidArgument("neighbor table does not match dataset size");

  std::vector<NeighborList> out(n);
  parallel_for(n, threads, [&](std::size_t v) {
    const auto& row = table[v];
    if (row.size() < K) throw InvalidArgument("neighbor table row shorter than K");
    std::span<const Neighbor> knn(row.data(), K);
    const auto id = static_cast<VertexId>(v);
    switch (strategy) {
      case EdgeStrategy::RngPruned: out[v] = rng_prune(knn, data, id); break;
      case EdgeStrategy::MrngPruned: out[v] = mrng_prune(knn, data, id); break;
      default: out[v].assign(knn.begin(), knn.end()); break;
    }
  });

  if (strategy == EdgeStrategy::UndirectedKnn) {
    // Reverse edges go in with their (symmetric) distance so the cap can rank them.
    std::vector<NeighborList> reverse(n);
    for (std::size_t v = 0; v < n; ++v) {
      for (const auto& nb : out[v]) reverse[nb.id].push_back({static_cast<VertexId>(v), nb.distance});
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto& list = out[v];
      list.insert(list.end(), reverse[v].begin(), reverse[v].end());
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end(),
                             [](const Neighbor& a, const Neighbor& b) { return a.id == b.id; }),
                 list.end());
    }
  }

  std::vector<std::vector<VertexId>> adjacency(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto& list = out[v];
    std::sort(list.begin(), list.end());
    if (mod_cap && list.size() > *mod_cap) list.resize(*mod_cap);
    adjacency[v] = ids_of(list);
  }
  return KnnGraph(std::move(adjacency), strategy, BuildParams{K, mod_cap});
}

/// Graph construction: exact K-NN of every vertex, subset chosen by
/// `strategy`, reverse edges for UndirectedKnn, then the optional out-degree cap
/// keeping the nearest neighbors. Deterministic.
inline KnnGraph build_graph(const VectorDataset& data, std::size_t K, EdgeStrategy strategy,
                            std::optional<std::size_t> mod_cap = std::nullopt, std::size_t threads = 0) {
  if (K == 0 || K + 1 > data.size()) {
    throw InvalidArgument("K=" + std::to_string(K) + " outside [1, " + std::to_string(data.size() - 1) + "]");
  }
  return build_graph(data, compute_knn_table(data, K, threads), K, strategy, mod_cap, threads);
}

}  // namespace knng
