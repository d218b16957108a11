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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "knng/two_phase.hpp"
#include "oracles.hpp"

namespace knng {
namespace {

SearchTrace trace_of(std::vector<VertexId> pops, std::size_t n = 10) {
  SearchTrace t;
  t.vertex_count = n;
  t.entry_vertex = pops.front();
  for (VertexId p : pops) t.pops.push_back({p, 0.0});
  t.pushes.resize(pops.size());
  return t;
}

NeighborList truth_of(std::vector<VertexId> ids) {
  NeighborList out;
  for (std::size_t i = 0; i < ids.size(); ++i) out.push_back({ids[i], static_cast<double>(i)});
  return out;
}

SccReport scc_of(std::vector<VertexId> c, std::size_t k) {
  SccReport r;
  r.k = k;
  r.components.push_back(std::move(c));
  return r;
}

TEST(PhaseSplit, BoundaryIsFirstComponentPop) {
  // Pops 7, 6 (a true neighbor before the boundary), 2 (in C), 5 (true, not in C), 3 (in C).
  const auto stats = phase_split(trace_of({7, 6, 2, 5, 3}), scc_of({2, 3}, 4), truth_of({2, 3, 5, 6}));
  EXPECT_TRUE(stats.entered);
  EXPECT_EQ(stats.hops_phase1, 2u);
  EXPECT_EQ(stats.hops_phase2, 3u);
  EXPECT_EQ(stats.scc_fraction_visited, 1.0);
  EXPECT_EQ(stats.extra_true_nn, 1u);
  EXPECT_EQ(stats.scc_size, 2u);
}

TEST(PhaseSplit, PartialVisit) {
  const auto stats = phase_split(trace_of({1, 4}), scc_of({1, 2, 3, 4}, 4), truth_of({1, 2, 3, 4}));
  EXPECT_EQ(stats.hops_phase1, 0u);
  EXPECT_EQ(stats.scc_fraction_visited, 0.5);
}

TEST(PhaseSplit, NeverEntered) {
  const auto stats = phase_split(trace_of({8, 9}), scc_of({1}, 3), truth_of({1, 2, 3}));
  EXPECT_FALSE(stats.entered);
  EXPECT_EQ(stats.hops_phase1, 2u);
  EXPECT_EQ(stats.hops_phase2, 0u);
  EXPECT_EQ(stats.scc_fraction_visited, 0.0);
  EXPECT_EQ(stats.extra_true_nn, 0u);
}

TEST(PhaseSplit, RejectsInconsistentInputs) {
  EXPECT_THROW(phase_split(trace_of({12}), scc_of({1}, 1), truth_of({1})), InvalidArgument);
  EXPECT_THROW(phase_split(trace_of({1}), scc_of({4}, 1), truth_of({1})), InvalidArgument);
  EXPECT_THROW(phase_split(trace_of({1}), scc_of({40}, 1), truth_of({1})), InvalidArgument);
}

TEST(Recall, CountsDistinctHits) {
  const std::vector<VertexId> truth{1, 2, 3, 4};
  EXPECT_EQ(recall(std::vector<VertexId>{1, 2, 9, 10}, truth), 0.5);
  EXPECT_EQ(recall(std::vector<VertexId>{4, 3, 2, 1}, truth), 1.0);
  EXPECT_EQ(recall(std::vector<VertexId>{1, 1, 1, 1}, truth), 0.25);
  EXPECT_EQ(recall(std::vector<VertexId>{}, truth), 0.0);
  EXPECT_THROW(recall(truth, std::vector<VertexId>{}), InvalidArgument);
  EXPECT_EQ(recall(truth_of({5, 6}), truth_of({6, 7})), 0.5);
}

TEST(EntryProbability, FractionOfTracesThatEntered) {
  const std::vector<SearchTrace> traces{trace_of({1, 2}), trace_of({3}), trace_of({4, 5}), trace_of({6})};
  const std::vector<SccReport> sccs{scc_of({2}, 2), scc_of({9}, 2), scc_of({4, 7}, 2), scc_of({}, 2)};
  EXPECT_EQ(estimate_entry_probability(traces, sccs), 0.5);
  EXPECT_THROW(estimate_entry_probability(std::span(traces).first(2), sccs), InvalidArgument);
  EXPECT_THROW(estimate_entry_probability({}, {}), InvalidArgument);
}

TEST(Pearson, KnownTable) {
  const std::vector<double> xs{1, 2, 3, 4, 5, 6}, ys{2, 1, 4, 3, 7, 5};
  EXPECT_NEAR(pearson(xs, ys), 16.0 * std::sqrt(3.0) / 35.0, 1e-12);
}

TEST(Pearson, BoundsAndErrors) {
  const std::vector<double> xs{1, 2, 3}, up{2, 4, 6}, down{3, 2, 1}, flat{5, 5, 5};
  EXPECT_DOUBLE_EQ(pearson(xs, up), 1.0);
  EXPECT_DOUBLE_EQ(pearson(xs, down), -1.0);
  EXPECT_THROW(pearson(xs, flat), InvalidArgument);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{2}), InvalidArgument);
  EXPECT_THROW(pearson(xs, std::vector<double>{1, 2}), InvalidArgument);
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> a(2 + rng() % 10), b(a.size());
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    const double r = pearson(a, b);
    ASSERT_GE(r, -1.0);
    ASSERT_LE(r, 1.0);
  }
}

TEST(Premise, OutNeighborsOutsideComponentMustBeFarther) {
  // 1-d: q at 0; members 1 (x=1) and 2 (x=2) form a cycle; 1 also links to 3.
  const VectorDataset d(1, {10, 1, 2, 1.5f});
  const std::vector<float> q{0};
  const std::vector<VertexId> c{1, 2};
  const KnnGraph closer({{1}, {2, 3}, {1}, {}}, EdgeStrategy::DirectedKnn, {1, std::nullopt});
  EXPECT_FALSE(traversal_premise_holds(closer, d, q, c));
  const KnnGraph farther({{1}, {0, 2}, {1}, {}}, EdgeStrategy::DirectedKnn, {1, std::nullopt});
  EXPECT_TRUE(traversal_premise_holds(farther, d, q, c));
  EXPECT_TRUE(traversal_premise_holds(closer, d, q, {}));
}

// Property: with L >= k, a search that expands any member of C_k(q) expands all
// of them. At most k-1 points are closer to q than a member of the k-neighborhood,
// so the result queue cannot fill with closer points while a member is queued.
TEST(PhaseSplit, EnteringImpliesFullVisit) {
  std::mt19937_64 rng(23);
  std::size_t entered = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 30 + rng() % 200, dim = 1 + rng() % 8;
    const auto d = oracle::random_points(rng, n, dim);
    const auto g = build_graph(d, 2 + rng() % 10, kAllStrategies[rng() % 4], 12);
    const auto q = oracle::random_points(rng, 1, dim);
    const std::size_t k = 1 + rng() % 15, L = k + rng() % 5;
    const auto truth = brute_force_knn(d, q[0], k);
    const auto scc = scc_decompose(induced_subgraph(g, ids_of(truth)));
    const auto tr = search(g, d, q[0], {k, L, RandomEntry{rng()}});
    const auto stats = phase_split(tr, scc, truth);
    if (!stats.entered) continue;
    ++entered;
    ASSERT_EQ(stats.scc_fraction_visited, 1.0) << "trial " << t;
    ASSERT_EQ(stats.hops_phase1 + stats.hops_phase2, tr.hop_count());
  }
  EXPECT_GT(entered, 100u);
}

}  // namespace
}  // namespace knng
