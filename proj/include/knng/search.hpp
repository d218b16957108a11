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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "knng/common.hpp"
#include "knng/dataset.hpp"
#include "knng/graph.hpp"
#include "knng/parallel.hpp"

namespace knng {

/// Entry vertex drawn uniformly at random; query i of a batch uses an
/// independent stream derived from (seed, i).
struct RandomEntry {
  std::uint64_t seed = 0;
};

struct FixedEntry {
  VertexId vertex = 0;
};

using EntryRule = std::variant<RandomEntry, FixedEntry>;

struct SearchParams {
  std::size_t k = 20;  ///< results returned
  std::size_t L = 20;  ///< beam width: capacity of the result queue, L >= k
  EntryRule entry = RandomEntry{};
};

/// Complete record of one search.
struct SearchTrace {
  VertexId entry_vertex = kInvalidVertex;
  NeighborList pops;                 ///< expanded vertices in expansion order
  std::vector<NeighborList> pushes;  ///< pushes[i]: vertices first enqueued while expanding pops[i]
  NeighborList result;               ///< top-k, sorted by (distance, id)
  std::size_t vertex_count = 0;      ///< size of the searched graph

  std::size_t hop_count() const noexcept { return pops.size(); }

  friend bool operator==(const SearchTrace&, const SearchTrace&) = default;
};

inline VertexId resolve_entry(const SearchParams& params, std::size_t n, std::size_t query_index = 0) {
  if (n == 0) throw InvalidArgument("cannot pick an entry vertex in an empty graph");
  if (const auto* fixed = std::get_if<FixedEntry>(&params.entry)) {
    if (fixed->vertex >= n) {
      throw InvalidArgument("entry vertex " + std::to_string(fixed->vertex) + " out of range [0, " +
                            std::to_string(n) + ")");
    }
    return fixed->vertex;
  }
  std::mt19937_64 rng(detail::mix_seed(std::get<RandomEntry>(params.entry).seed, query_index));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  return static_cast<VertexId>(pick(rng));
}

/// Best-first search with backtracking.
///
/// `cand` is a min-queue of vertices waiting for expansion; `result_L` keeps the
/// L nearest vertices seen so far. The nearest candidate v is popped; once
/// result_L is full and v is farther than its worst entry the search stops,
/// otherwise every not-yet-seen out-neighbor of v is pushed to both queues.
/// A seen set (pushed or expanded) keeps every vertex from being enqueued twice.
/// Ties are broken by ascending VertexId.
inline SearchTrace search(const KnnGraph& g, const VectorDataset& data, std::span<const float> query,
                          const SearchParams& params, std::size_t query_index = 0) {
  const std::size_t n = g.size();
  if (n == 0) throw InvalidArgument("search on an empty graph");
  if (data.size() != n) {
    throw InvalidArgument("graph has " + std::to_string(n) + " vertices, dataset has " +
                          std::to_string(data.size()));
  }
  if (query.size() != data.dim()) {
    throw InvalidArgument("query has dim " + std::to_string(query.size()) + ", dataset has " +
                          std::to_string(data.dim()));
  }
  detail::check_finite(query, "query");
  if (params.k == 0 || params.k > params.L || params.L > n) {
    throw InvalidArgument("search parameters must satisfy 1 <= k <= L <= n (k=" + std::to_string(params.k) +
                          ", L=" + std::to_string(params.L) + ", n=" + std::to_string(n) + ")");
  }

  auto dist = [&](VertexId v) { return detail::squared_l2(query.data(), data[v].data(), data.dim()); };

  SearchTrace trace;
  trace.vertex_count = n;
  trace.entry_vertex = resolve_entry(params, n, query_index);

  std::vector<std::uint8_t> seen(n, 0);
  std::priority_queue<Neighbor, std::vector<Neighbor>, std::greater<>> cand;
  detail::TopK result(params.L);

  const Neighbor start{trace.entry_vertex, dist(trace.entry_vertex)};
  seen[start.id] = 1;
  cand.push(start);
  result.offer(start);

  while (!cand.empty()) {
    const Neighbor v = cand.top();
    cand.pop();
    if (result.full() && v.distance > result.worst().distance) break;

    trace.pops.push_back(v);
    auto& pushed = trace.pushes.emplace_back();
    for (VertexId e : g.neighbors(v.id)) {
      if (seen[e]) continue;
      seen[e] = 1;
      const Neighbor nb{e, dist(e)};
      cand.push(nb);
      result.offer(nb);
      pushed.push_back(nb);
    }
  }

  trace.result = result.take_sorted();
  if (trace.result.size() > params.k) trace.result.resize(params.k);
  return trace;
}

/// One search per row of `queries` (row-major, data.dim() floats per row);
/// query i uses entry stream i. Output order matches input order.
inline std::vector<SearchTrace> batch_search(const KnnGraph& g, const VectorDataset& data,
                                             std::span<const float> queries, const SearchParams& params,
                                             std::size_t threads = 0) {
  const std::size_t dim = data.dim();
  if (dim == 0 || queries.size() % dim != 0) throw InvalidArgument("query buffer is not a multiple of dim");
  const std::size_t count = queries.size() / dim;
  std::vector<SearchTrace> traces(count);
  parallel_for(count, threads, [&](std::size_t i) {
    try {
      traces[i] = search(g, data, queries.subspan(i * dim, dim), params, i);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("query " + std::to_string(i) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("query " + std::to_string(i) + ": " + e.what());
    }
  });
  return traces;
}

inline std::vector<SearchTrace> batch_search(const KnnGraph& g, const VectorDataset& data,
                                             const VectorDataset& queries, const SearchParams& params,
                                             std::size_t threads = 0) {
  if (queries.dim() != data.dim()) {
    throw InvalidArgument("queries have dim " + std::to_string(queries.dim()) + ", dataset has " +
                          std::to_string(data.dim()));
  }
  return batch_search(g, data, queries.values(), params, threads);
}

}  // namespace knng
