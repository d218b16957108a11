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


// Builds a small graph over random points, searches it and prints recall,
// hop counts and the clustering coefficient.

#include <cstdio>

#include "knng/knng.hpp"

int main() {
  using namespace knng;
  const auto all = generate_synthetic(SyntheticKind::GaussianClusters, 2100, 16, {10, 0.4}, 7);
  const auto base = all.slice(0, 2000);
  const auto queries = all.slice(2000, 100);

  const auto graph = build_graph(base, 20, EdgeStrategy::UndirectedKnn, kDefaultModCap);
  const auto traces = batch_search(graph, base, queries, SearchParams{10, 20, RandomEntry{1}});
  const auto truth = brute_force_knn_batch(base, queries, 10);

  double total_recall = 0.0, total_hops = 0.0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    total_recall += recall(traces[i].result, truth[i]);
    total_hops += static_cast<double>(traces[i].hop_count());
  }
  std::printf("vertices %zu, mean out-degree %.2f\n", graph.size(), graph.mean_out_degree());
  std::printf("clustering coefficient %.4f\n", global_clustering(graph));
  std::printf("recall@10 %.3f, mean hops %.1f\n", total_recall / 100.0, total_hops / 100.0);
}
