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


// Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "knng/knng.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

namespace {

using namespace knng;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_seconds <= 0.0 || s < limit_seconds;
  const bool pass = o.pass && in_time;
  failures += pass ? 0 : 1;
  char timing[96];
  if (limit_seconds > 0.0) {
    std::snprintf(timing, sizeof(timing), "%.1f s, limit %.0f s%s", s, limit_seconds, in_time ? "" : " EXCEEDED");
  } else {
    std::snprintf(timing, sizeof(timing), "%.1f s", s);
  }
  std::printf("%s [%d] %s: %s (%s)\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), timing);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Desk-scale datasets shared by criteria 5-9.
constexpr std::size_t kN = 20000;
constexpr std::size_t kDim = 32;
constexpr std::uint64_t kSeed = 1;

DatasetSpec uniform_spec() { return parse_dataset_spec("uniform:n=20000,dim=32", kSeed); }
DatasetSpec clustered_spec() { return parse_dataset_spec("gaussian:clusters=20,sigma=0.35,n=20000,dim=32", kSeed); }

ExperimentConfig search_config(std::vector<DatasetSpec> datasets) {
  ExperimentConfig cfg;
  cfg.datasets = std::move(datasets);
  cfg.K_values = {20};
  cfg.strategies = {EdgeStrategy::UndirectedKnn};
  cfg.mod_cap = 70;
  cfg.query_count = 100;
  cfg.k = 20;
  cfg.L = 20;
  cfg.seed = kSeed;
  return cfg;
}

ExperimentCache cache;

Outcome scc_oracle() {
  std::mt19937_64 rng(2024);
  const double ps[] = {0.05, 0.15, 0.4};
  int same = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng() % 64;
    const auto adj = oracle::random_digraph(rng, n, ps[t % 3]);
    std::vector<std::vector<VertexId>> lists(adj.begin(), adj.end());
    const KnnGraph g(lists, EdgeStrategy::DirectedKnn, {1, std::nullopt});
    std::vector<VertexId> all(n);
    for (VertexId i = 0; i < n; ++i) all[i] = i;
    same += scc_decompose(induced_subgraph(g, all)).components == oracle::scc_partition(adj) ? 1 : 0;
  }
  return {same == 1000, std::to_string(same) + "/1000 partitions identical"};
}

Outcome theorem1() {
  const auto r = verify_theorem1(200, 7);
  return {r.passed == 200 && r.trials == 200,
          std::to_string(r.passed) + "/200 planted instances visited all of C_k(q) (" +
              std::to_string(r.perturbations) + " re-plantings)"};
}

Outcome saturation() {
  const auto base = generate_synthetic(SyntheticKind::Uniform, 2000, 8, {}, 11);
  const auto queries = generate_synthetic(SyntheticKind::Uniform, 100, 8, {}, 12);
  const auto g = build_graph(base, 10, EdgeStrategy::UndirectedKnn);
  if (!is_strongly_connected(g)) return {false, "fixture graph is not strongly connected"};
  const auto traces = batch_search(g, base, queries, {20, base.size(), RandomEntry{13}});
  int exact = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) exact += traces[i].result == brute_force_knn(base, queries[i], 20);
  return {exact == 100, std::to_string(exact) + "/100 results equal brute force (n=2000, L=n)"};
}

Outcome clustering_fixtures() {
  const KnnGraph fig({{1, 2, 3, 4}, {2}, {}, {4}, {}}, EdgeStrategy::DirectedKnn, {1, std::nullopt});
  const double c = local_clustering(fig, 0);
  std::vector<std::vector<VertexId>> complete(6);
  for (VertexId i = 0; i < 6; ++i)
    for (VertexId j = 0; j < 6; ++j)
      if (i != j) complete[i].push_back(j);
  const double full = global_clustering(KnnGraph(complete, EdgeStrategy::DirectedKnn, {1, std::nullopt}));
  const double match =
      global_clustering(KnnGraph({{1}, {0}, {3}, {2}, {5}, {4}}, EdgeStrategy::DirectedKnn, {1, std::nullopt}));
  return {c == 1.0 / 3.0 && full == 1.0 && match == 0.0,
          "C_i=" + fmt("%.17g", c) + ", complete=" + fmt("%g", full) + ", matching=" + fmt("%g", match)};
}

Outcome cc_vs_k() {
  ExperimentConfig cfg = search_config({uniform_spec(), clustered_spec()});
  cfg.K_values = {10, 20, 50};
  cfg.strategies = {EdgeStrategy::DirectedKnn};
  const auto rows = run_cc_vs_k(cfg, &cache);
  bool monotone = true;
  double uniform20 = -1.0;
  std::string detail;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].dataset == rows[i - 1].dataset && rows[i].clustering < rows[i - 1].clustering) {
      monotone = false;
    }
    if (rows[i].dataset == uniform_spec().name && rows[i].K == 20) uniform20 = rows[i].clustering;
    detail += (i % 3 == 0 ? (i ? "; " : "") + rows[i].dataset + " " : std::string(", ")) + "K" +
              std::to_string(rows[i].K) + "=" + fmt("%.4f", rows[i].clustering);
  }
  const bool small = uniform20 >= 0.0 && uniform20 < 0.01;
  return {monotone && small, std::string(monotone ? "non-decreasing" : "NOT monotone") + "; uniform K=20 CC " +
                                 fmt("%.4f", uniform20) + (small ? " < 0.01" : " >= 0.01") + " [" + detail + "]"};
}

Outcome cc_recall_correlation() {
  auto cfg = search_config(cluster_spread_ladder(kN, kDim, kSeed));
  const auto report = run_cc_vs_recall(cfg, &cache);
  std::string detail;
  for (const auto& c : report.cells) {
    detail += (detail.empty() ? "" : ", ") + fmt("(%.3f", c.clustering) + fmt(", %.3f)", c.mean_recall);
  }
  const auto r = report.correlations.at(0).pearson;
  return {r && *r >= 0.7, "Pearson " + (r ? fmt("%.4f", *r) : std::string("undefined")) + " over " +
                              std::to_string(report.cells.size()) + " datasets (CC, recall): " + detail};
}

Outcome recall_vs_scc() {
  const auto cell = run_two_phase(search_config({clustered_spec()}), &cache).cells.at(0);
  const bool ok = cell.mean_recall >= cell.mean_scc_ratio[0] - 0.05;
  return {ok, "mean recall " + fmt("%.4f", cell.mean_recall) + ", mean SCC1 ratio " +
                  fmt("%.4f", cell.mean_scc_ratio[0]) + ", margin 0.05"};
}

Outcome two_phase() {
  const auto clustered = run_two_phase(search_config({clustered_spec()}), &cache).cells.at(0);
  std::size_t covered = 0, violations = 0;
  for (const auto& q : clustered.queries) {
    if (!q.phase.entered || !q.premise_holds) continue;
    ++covered;
    if (q.phase.scc_fraction_visited != 1.0) ++violations;
  }
  const bool shorter = clustered.mean_hops_phase1 < clustered.mean_hops_phase2;

  const auto uniform = run_two_phase(search_config({uniform_spec()}), &cache).cells.at(0);
  std::size_t not_entered = 0;
  for (const auto& q : uniform.queries) not_entered += q.phase.entered ? 0 : 1;
  const bool tiny = uniform.mean_scc_size[0] <= 3.0;

  return {violations == 0 && shorter && tiny && not_entered > 0,
          "clustered: " + std::to_string(covered - violations) + "/" + std::to_string(covered) +
              " entered premise-holding queries fully visited, hops p1 " + fmt("%.2f", clustered.mean_hops_phase1) +
              " vs p2 " + fmt("%.2f", clustered.mean_hops_phase2) + "; uniform: mean |C_k(q)| " +
              fmt("%.2f", uniform.mean_scc_size[0]) + (tiny ? " <= 3" : " > 3") + ", " +
              std::to_string(not_entered) + " queries never entered"};
}

Outcome undirected_vs_directed() {
  const auto report = run_scc_tables(search_config({clustered_spec()}), &cache);
  const CellReport* dir = nullptr;
  const CellReport* und = nullptr;
  for (const auto& c : report.cells) (c.strategy == EdgeStrategy::DirectedKnn ? dir : und) = &c;
  std::size_t larger_or_equal = 0;
  for (std::size_t i = 0; i < dir->queries.size(); ++i) {
    larger_or_equal += und->queries[i].scc_sizes[0] >= dir->queries[i].scc_sizes[0] ? 1 : 0;
  }
  return {und->mean_scc_ratio[0] >= dir->mean_scc_ratio[0],
          "mean SCC1 ratio undirected " + fmt("%.4f", und->mean_scc_ratio[0]) + " vs directed " +
              fmt("%.4f", dir->mean_scc_ratio[0]) + "; undirected >= directed on " +
              std::to_string(larger_or_equal) + "/" + std::to_string(dir->queries.size()) + " queries"};
}

Outcome determinism() {
  testing::TempDir dir;
  ExperimentConfig cfg;
  cfg.datasets = {parse_dataset_spec("uniform:n=1500,dim=8", 3),
                  parse_dataset_spec("gaussian:clusters=5,sigma=0.3,n=1500,dim=8", 3)};
  cfg.K_values = {8, 16};
  cfg.strategies = {EdgeStrategy::DirectedKnn, EdgeStrategy::UndirectedKnn, EdgeStrategy::MrngPruned};
  cfg.query_count = 30;
  cfg.k = 10;
  cfg.L = 15;
  cfg.seed = 5;
  std::size_t files = 0, identical = 0;
  auto compare_dirs = [&](const std::filesystem::path& a, const std::filesystem::path& b) {
    for (const auto& e : std::filesystem::directory_iterator(a)) {
      ++files;
      identical += slurp(e.path()) == slurp(b / e.path().filename()) ? 1 : 0;
    }
  };
  for (auto table : {ReportTable::CcVsK, ReportTable::CcVsRecall, ReportTable::Scc, ReportTable::TwoPhase,
                     ReportTable::Theorem1}) {
    const auto name = std::string(table_name(table));
    cfg.threads = 1;
    emit_table(table, cfg, 25, dir / ("lib-" + name + "-1"));
    cfg.threads = 4;
    emit_table(table, cfg, 25, dir / ("lib-" + name + "-2"));
    compare_dirs(dir / ("lib-" + name + "-1"), dir / ("lib-" + name + "-2"));
  }

#ifdef KNNG_CLI_PATH
  const std::vector<std::string> commands{
      "generate --kind gaussian --clusters 5 --sigma 0.3 --n 2000 --dim 8 --seed 4 --out d.fvecs",
      "generate --n 50 --dim 8 --seed 5 --out q.csv",
      "build --input d.fvecs --k 12 --strategy undirected --cap 20 --out g.knng",
      "search --graph g.knng --data d.fvecs --queries q.csv --k 10 --L 20 --seed 6 --out t.jsonl",
      "search --graph g.knng --data d.fvecs --queries q.csv --k 10 --L 20 --seed 6 --format ivecs --out r.ivecs",
      "analyze --table two-phase --dataset file:path=d.fvecs,queries=q.csv --K 12 --k 10 --L 20 --seed 6 --out-dir tp",
      "analyze --table scc --dataset uniform:n=1000,dim=4 --K 10 --queries 20 --k 8 --L 8 --seed 6 --out-dir scc",
      "analyze --table theorem1 --trials 20 --seed 6 --out-dir t1"};
  for (const char* run : {"run1", "run2"}) {
    std::filesystem::create_directories(dir / run);
    for (const auto& c : commands) {
      const std::string cmd = "cd '" + (dir / run).string() + "' && '" KNNG_CLI_PATH "' " + c + " >/dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "CLI command failed: " + c};
    }
  }
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir / "run1")) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto rel = std::filesystem::relative(e.path(), dir / "run1");
    identical += slurp(e.path()) == slurp(dir / "run2" / rel) ? 1 : 0;
  }
#else
  return {false, "CLI not built"};
#endif
  return {files > 0 && identical == files,
          std::to_string(identical) + "/" + std::to_string(files) + " re-run output files byte-identical"};
}

}  // namespace

int main() {
  criterion(1, "SCC oracle equivalence", 10, scc_oracle);
  criterion(2, "Traversal guarantee on planted instances", 30, theorem1);
  criterion(3, "Exactness at saturation", 60, saturation);
  criterion(4, "Clustering coefficient fixtures", 0, clustering_fixtures);
  criterion(5, "CC-vs-K trend", 300, cc_vs_k);
  criterion(6, "CC-recall correlation", 600, cc_recall_correlation);
  criterion(7, "Recall close to SCC1 ratio", 120, recall_vs_scc);
  criterion(8, "Two-phase structure", 120, two_phase);
  criterion(9, "Undirected SCC1 >= directed", 0, undirected_vs_directed);
  criterion(10, "Determinism", 0, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
