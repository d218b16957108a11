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

// Per-query diagnostics over a search trace: the split into phase 1 (walking
// toward the maximum strongly connected neighborhood C_k(q)) and phase 2
// (traversing it), recall, and the empirical entry probability.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <unordered_set>
#include <vector>

#include "knng/scc.hpp"
#include "knng/search.hpp"

namespace knng {

struct PhaseStats {
  std::size_t hops_phase1 = 0;  ///< pops before the first pop of a C_k(q) member
  std::size_t hops_phase2 = 0;  ///< remaining pops
  bool entered = false;
  double scc_fraction_visited = 0.0;  ///< |pops ∩ C_k(q)| / |C_k(q)|
  std::size_t extra_true_nn = 0;      ///< true kNN outside C_k(q) popped at or after the boundary
  std::size_t scc_size = 0;           ///< |C_k(q)|

  friend bool operator==(const PhaseStats&, const PhaseStats&) = default;
};

/// The phase boundary is the first *expansion* of a C_k(q) member; a vertex that
/// was pushed but never popped does not count as visited.
inline PhaseStats phase_split(const SearchTrace& trace, const SccReport& scc, const NeighborList& truth) {
  const std::size_t n = trace.vertex_count;
  auto check = [n](VertexId id, const char* what) {
    if (id >= n) {
      throw InvalidArgument(std::string(what) + " id " + std::to_string(id) + " outside the searched graph of " +
                            std::to_string(n) + " vertices");
    }
  };
  for (const auto& p : trace.pops) check(p.id, "trace pop");
  for (const auto& r : trace.result) check(r.id, "trace result");

  const std::unordered_set<VertexId> truth_ids = [&] {
    std::unordered_set<VertexId> s;
    for (const auto& t : truth) s.insert(t.id);
    return s;
  }();
  const auto& component = scc.max_component();
  for (VertexId c : component) {
    check(c, "component");
    if (!truth_ids.count(c)) {
      throw InvalidArgument("component member " + std::to_string(c) +
                            " is not among the true neighbors; trace, SCC report and truth disagree");
    }
  }
  const std::unordered_set<VertexId> members(component.begin(), component.end());

  PhaseStats stats;
  stats.scc_size = component.size();
  std::size_t boundary = trace.pops.size();
  for (std::size_t i = 0; i < trace.pops.size(); ++i) {
    if (members.count(trace.pops[i].id)) {
      boundary = i;
      break;
    }
  }
  stats.entered = boundary < trace.pops.size();
  stats.hops_phase1 = boundary;
  stats.hops_phase2 = trace.pops.size() - boundary;
  if (!stats.entered) return stats;

  std::size_t visited = 0;
  for (std::size_t i = boundary; i < trace.pops.size(); ++i) {
    const VertexId id = trace.pops[i].id;
    if (members.count(id)) {
      ++visited;
    } else if (truth_ids.count(id)) {
      ++stats.extra_true_nn;
    }
  }
  stats.scc_fraction_visited = static_cast<double>(visited) / static_cast<double>(members.size());
  return stats;
}

/// |result ∩ truth| / |truth|.
inline double recall(std::span<const VertexId> result, std::span<const VertexId> truth) {
  if (truth.empty()) throw InvalidArgument("recall against an empty ground truth");
  const std::unordered_set<VertexId> t(truth.begin(), truth.end());
  std::unordered_set<VertexId> counted;
  for (VertexId r : result) {
    if (t.count(r)) counted.insert(r);
  }
  return static_cast<double>(counted.size()) / static_cast<double>(truth.size());
}

inline double recall(const NeighborList& result, const NeighborList& truth) {
  const auto r = ids_of(result);
  const auto t = ids_of(truth);
  return recall(r, t);
}

/// Fraction of traces that expanded at least one member of their C_k(q).
inline double estimate_entry_probability(std::span<const SearchTrace> traces, std::span<const SccReport> sccs) {
  if (traces.size() != sccs.size()) {
    throw InvalidArgument("entry probability: " + std::to_string(traces.size()) + " traces but " +
                          std::to_string(sccs.size()) + " SCC reports");
  }
  if (traces.empty()) throw InvalidArgument("entry probability of an empty batch");
  std::size_t entered = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& c = sccs[i].max_component();
    const bool hit = std::any_of(traces[i].pops.begin(), traces[i].pops.end(), [&](const Neighbor& p) {
      return std::binary_search(c.begin(), c.end(), p.id);
    });
    entered += hit ? 1 : 0;
  }
  return static_cast<double>(entered) / static_cast<double>(traces.size());
}

/// Sample Pearson correlation. Undefined (throws) for fewer than two points or
/// zero variance in either series.
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("pearson: series lengths differ");
  if (xs.size() < 2) throw InvalidArgument("pearson: need at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw InvalidArgument("pearson: zero variance, correlation undefined");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Premise of the traversal guarantee: every vertex outside `component` that is
/// an out-neighbor of a member is strictly farther from q than every member.
inline bool traversal_premise_holds(const KnnGraph& g, const VectorDataset& data, std::span<const float> q,
                                    std::span<const VertexId> component) {
  if (component.empty()) return true;
  const std::unordered_set<VertexId> members(component.begin(), component.end());
  double farthest_member = 0.0;
  for (VertexId c : component) farthest_member = std::max(farthest_member, distance(q, data[c]));
  for (VertexId c : component) {
    for (VertexId w : g.neighbors(c)) {
      if (members.count(w)) continue;
      if (!(distance(q, data[w]) > farthest_member)) return false;
    }
  }
  return true;
}

}  // namespace knng
