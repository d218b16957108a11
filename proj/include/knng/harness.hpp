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

// End-to-end experiments: clustering coefficient against K, clustering
// coefficient against recall, SCC size tables and two-phase statistics. Every
// runner is deterministic in its config; CSV output is byte-stable.

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "knng/clustering.hpp"
#include "knng/dataset.hpp"
#include "knng/graph.hpp"
#include "knng/scc.hpp"
#include "knng/search.hpp"
#include "knng/two_phase.hpp"
#include "knng/vecs_io.hpp"

namespace knng {

// ---------------------------------------------------------------------------
// Dataset recipes

enum class DatasetSource { Uniform, GaussianClusters, File };

/// A synthetic recipe or a file. Text form, as accepted by parse_dataset_spec:
///
///   uniform:n=20000,dim=32,seed=1
///   gaussian:clusters=20,sigma=0.35,n=20000,dim=32,seed=1
///   file:path=base.fvecs,queries=query.fvecs
///
/// Every form also accepts name=<label>.
struct DatasetSpec {
  DatasetSource source = DatasetSource::Uniform;
  std::string name;
  std::size_t n = 20000;
  std::size_t dim = 32;
  std::size_t clusters = 20;
  double sigma = 0.35;
  std::uint64_t seed = 1;
  std::string path;
  std::string queries_path;

  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("bad value '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

}  // namespace detail

inline std::string default_dataset_name(const DatasetSpec& s) {
  switch (s.source) {
    case DatasetSource::Uniform:
      return "uniform-n" + std::to_string(s.n) + "-d" + std::to_string(s.dim) + "-s" + std::to_string(s.seed);
    case DatasetSource::GaussianClusters:
      return "gauss-c" + std::to_string(s.clusters) + "-sigma" + detail::format_double(s.sigma) + "-n" +
             std::to_string(s.n) + "-d" + std::to_string(s.dim) + "-s" + std::to_string(s.seed);
    case DatasetSource::File:
      return std::filesystem::path(s.path).stem().string();
  }
  return "dataset";
}

/// `default_seed` applies when the text has no seed= option.
inline DatasetSpec parse_dataset_spec(std::string_view text, std::uint64_t default_seed = 1) {
  DatasetSpec spec;
  spec.seed = default_seed;
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  if (kind == "uniform") {
    spec.source = DatasetSource::Uniform;
  } else if (kind == "gaussian" || kind == "gaussian_clusters") {
    spec.source = DatasetSource::GaussianClusters;
  } else if (kind == "file") {
    spec.source = DatasetSource::File;
  } else {
    throw InvalidArgument("unknown dataset kind '" + std::string(kind) + "' (expected uniform, gaussian or file)");
  }
  std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    rest.remove_prefix(comma == std::string_view::npos ? rest.size() : comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidArgument("dataset option '" + std::string(item) + "' lacks '='");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "name") {
      spec.name = value;
    } else if (key == "n") {
      spec.n = detail::parse_number<std::size_t>(value, key);
    } else if (key == "dim") {
      spec.dim = detail::parse_number<std::size_t>(value, key);
    } else if (key == "clusters" || key == "c") {
      spec.clusters = detail::parse_number<std::size_t>(value, key);
    } else if (key == "sigma") {
      spec.sigma = detail::parse_number<double>(value, key);
    } else if (key == "seed") {
      spec.seed = detail::parse_number<std::uint64_t>(value, key);
    } else if (key == "path") {
      spec.path = value;
    } else if (key == "queries") {
      spec.queries_path = value;
    } else {
      throw InvalidArgument("unknown dataset option '" + std::string(key) + "'");
    }
  }
  if (spec.source == DatasetSource::File && spec.path.empty()) throw InvalidArgument("file dataset needs path=");
  if (spec.name.empty()) spec.name = default_dataset_name(spec);
  return spec;
}

inline nlohmann::json to_json(const DatasetSpec& s) {
  nlohmann::json j{{"name", s.name}};
  switch (s.source) {
    case DatasetSource::Uniform:
      j.update({{"kind", "uniform"}, {"domain", "unit cube"}, {"n", s.n}, {"dim", s.dim}, {"seed", s.seed}});
      break;
    case DatasetSource::GaussianClusters:
      j.update({{"kind", "gaussian_clusters"}, {"clusters", s.clusters}, {"sigma", s.sigma}, {"n", s.n},
                {"dim", s.dim}, {"seed", s.seed}});
      break;
    case DatasetSource::File:
      j.update({{"kind", "file"}, {"path", s.path}, {"queries", s.queries_path}, {"seed", s.seed}});
      break;
  }
  return j;
}

/// Uniform data plus Gaussian-cluster datasets of decreasing spread, which
/// spans the clustering coefficient from low to high while keeping the
/// graphs navigable (at much smaller spreads the clusters disconnect).
inline std::vector<DatasetSpec> cluster_spread_ladder(std::size_t n = 20000, std::size_t dim = 32,
                                                      std::uint64_t seed = 1) {
  std::vector<DatasetSpec> ladder;
  DatasetSpec spec;
  spec.n = n;
  spec.dim = dim;
  spec.seed = seed;
  spec.source = DatasetSource::Uniform;
  spec.name = default_dataset_name(spec);
  ladder.push_back(spec);
  spec.source = DatasetSource::GaussianClusters;
  spec.clusters = 20;
  for (double sigma : {1.0, 0.7, 0.5, 0.45, 0.4, 0.35}) {
    spec.sigma = sigma;
    spec.name = default_dataset_name(spec);
    ladder.push_back(spec);
  }
  return ladder;
}

/// A dataset argument: either a single spec or "ladder[:n=N,dim=D]".
inline std::vector<DatasetSpec> expand_dataset_arg(std::string_view text, std::uint64_t default_seed) {
  if (text.substr(0, text.find(':')) != "ladder") return {parse_dataset_spec(text, default_seed)};
  std::size_t n = 20000, dim = 32;
  std::uint64_t seed = default_seed;
  std::string_view rest = text.size() > 6 ? text.substr(7) : std::string_view{};
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = rest.substr(0, comma);
    rest.remove_prefix(comma == std::string_view::npos ? rest.size() : comma + 1);
    const auto eq = item.find('=');
    const auto key = item.substr(0, eq);
    const auto value = eq == std::string_view::npos ? std::string_view{} : item.substr(eq + 1);
    if (key == "n") {
      n = detail::parse_number<std::size_t>(value, key);
    } else if (key == "dim") {
      dim = detail::parse_number<std::size_t>(value, key);
    } else if (key == "seed") {
      seed = detail::parse_number<std::uint64_t>(value, key);
    } else {
      throw InvalidArgument("unknown ladder option '" + std::string(item) + "'");
    }
  }
  return cluster_spread_ladder(n, dim, seed);
}

// ---------------------------------------------------------------------------
// Configuration

struct ExperimentConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<std::size_t> K_values{20};
  std::vector<EdgeStrategy> strategies{EdgeStrategy::UndirectedKnn};
  std::optional<std::size_t> mod_cap = kDefaultModCap;
  std::size_t query_count = 100;
  std::size_t k = 20;
  std::size_t L = 20;
  std::uint64_t seed = 0;  ///< search entry points and held-out query sampling
  std::filesystem::path output_dir;
  std::size_t threads = 0;

  void validate() const {
    if (datasets.empty()) throw InvalidArgument("experiment needs at least one dataset");
    if (K_values.empty()) throw InvalidArgument("experiment needs at least one K");
    if (strategies.empty()) throw InvalidArgument("experiment needs at least one strategy");
    if (query_count == 0) throw InvalidArgument("experiment needs at least one query");
    if (k == 0 || L < k) throw InvalidArgument("experiment needs 1 <= k <= L");
    for (auto K : K_values) {
      if (K == 0) throw InvalidArgument("K must be positive");
    }
    std::map<std::string, int> names;
    for (const auto& d : datasets) {
      if (++names[d.name] > 1) throw InvalidArgument("duplicate dataset name '" + d.name + "'");
      if (d.source != DatasetSource::File) {
        const std::size_t maxK = *std::max_element(K_values.begin(), K_values.end());
        if (maxK + 1 > d.n) throw InvalidArgument("K exceeds size of dataset '" + d.name + "'");
        if (L > d.n) throw InvalidArgument("L exceeds size of dataset '" + d.name + "'");
      }
    }
  }
};

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json datasets = nlohmann::json::array();
  for (const auto& d : c.datasets) datasets.push_back(to_json(d));
  nlohmann::json strategies = nlohmann::json::array();
  for (auto s : c.strategies) strategies.push_back(strategy_name(s));
  return {{"datasets", std::move(datasets)},
          {"K", c.K_values},
          {"strategies", std::move(strategies)},
          {"mod_cap", c.mod_cap ? nlohmann::json(*c.mod_cap) : nlohmann::json(nullptr)},
          {"queries", c.query_count},
          {"k", c.k},
          {"L", c.L},
          {"seed", c.seed},
          {"hop_count", "expansions (pops)"}};
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = kDigits[v & 0xF];
  return s;
}

/// Hash of the canonical JSON form; output_dir and threads do not affect results
/// and are not part of it.
inline std::string config_hash(const ExperimentConfig& c) { return hex64(fnv1a64(to_json(c).dump())); }

// ---------------------------------------------------------------------------
// Materialization and caching

struct MaterializedDataset {
  std::string name;
  VectorDataset base;
  VectorDataset queries;
};

inline MaterializedDataset materialize(const DatasetSpec& spec, std::size_t query_count) {
  MaterializedDataset m;
  m.name = spec.name;
  if (spec.source != DatasetSource::File) {
    // Queries come from the same generator and are held out of the base set.
    const auto kind = spec.source == DatasetSource::Uniform ? SyntheticKind::Uniform : SyntheticKind::GaussianClusters;
    const auto all = generate_synthetic(kind, spec.n + query_count, spec.dim, {spec.clusters, spec.sigma}, spec.seed);
    m.base = all.slice(0, spec.n, spec.name);
    m.queries = all.slice(spec.n, query_count, spec.name + "-queries");
    return m;
  }

  auto all = load_vectors(spec.path);
  if (!spec.queries_path.empty()) {
    auto queries = load_vectors(spec.queries_path);
    if (queries.dim() != all.dim()) throw InvalidArgument("query file dimension differs from " + spec.path);
    const std::size_t count = std::min(query_count, queries.size());
    m.base = VectorDataset(all.dim(), {all.values().begin(), all.values().end()}, spec.name);
    m.queries = queries.slice(0, count, spec.name + "-queries");
    return m;
  }
  if (all.size() <= query_count + 1) throw InvalidArgument(spec.path + " too small to hold out queries");
  std::vector<VertexId> order(all.size());
  std::iota(order.begin(), order.end(), 0u);
  std::mt19937_64 rng(detail::splitmix64(spec.seed));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<VertexId> held(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(query_count));
  std::vector<VertexId> kept(order.begin() + static_cast<std::ptrdiff_t>(query_count), order.end());
  std::sort(held.begin(), held.end());
  std::sort(kept.begin(), kept.end());
  m.base = all.gather(kept, spec.name);
  m.queries = all.gather(held, spec.name + "-queries");
  return m;
}

/// Memoizes datasets, neighbor tables and ground truth across runs that share
/// datasets. Not thread-safe.
class ExperimentCache {
 public:
  const MaterializedDataset& dataset(const DatasetSpec& spec, std::size_t query_count) {
    auto& entry = entries_[key(spec, query_count)];
    if (!entry.data) entry.data = std::make_unique<MaterializedDataset>(materialize(spec, query_count));
    return *entry.data;
  }

  /// Exact neighbor table with at least K entries per vertex.
  const KnnTable& table(const DatasetSpec& spec, std::size_t query_count, std::size_t K, std::size_t threads) {
    const auto& d = dataset(spec, query_count);
    auto& entry = entries_[key(spec, query_count)];
    if (entry.table.empty() || entry.table.front().size() < K) entry.table = compute_knn_table(d.base, K, threads);
    return entry.table;
  }

  /// Exact k nearest base points of every held-out query.
  const std::vector<NeighborList>& truth(const DatasetSpec& spec, std::size_t query_count, std::size_t k,
                                         std::size_t threads) {
    const auto& d = dataset(spec, query_count);
    auto& entry = entries_[key(spec, query_count)];
    auto& t = entry.truth[k];
    if (t.empty()) t = brute_force_knn_batch(d.base, d.queries, k, threads);
    return t;
  }

 private:
  struct Entry {
    std::unique_ptr<MaterializedDataset> data;
    KnnTable table;
    std::map<std::size_t, std::vector<NeighborList>> truth;
  };

  static std::string key(const DatasetSpec& spec, std::size_t query_count) {
    return to_json(spec).dump() + "#" + std::to_string(query_count);
  }

  std::map<std::string, Entry> entries_;
};

// ---------------------------------------------------------------------------
// Reports

struct QueryRow {
  std::size_t query_id = 0;
  double recall = 0.0;
  std::size_t hops = 0;
  PhaseStats phase;
  std::array<std::size_t, 3> scc_sizes{};
  bool premise_holds = false;
};

struct CellReport {
  std::string dataset;
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t K = 0;
  EdgeStrategy strategy = EdgeStrategy::UndirectedKnn;
  std::size_t k = 0;
  double clustering = 0.0;
  double mean_out_degree = 0.0;

  // Aggregates over `queries`; see summarize().
  double mean_recall = 0.0;
  double mean_hops = 0.0;
  double mean_hops_phase1 = 0.0;
  double mean_hops_phase2 = 0.0;
  std::array<double, 3> mean_scc_size{};
  std::array<double, 3> mean_scc_ratio{};
  double entry_probability = 0.0;

  std::vector<QueryRow> queries;
};

struct CorrelationRow {
  std::size_t K = 0;
  EdgeStrategy strategy = EdgeStrategy::UndirectedKnn;
  std::size_t datasets = 0;
  std::optional<double> pearson;  ///< empty when either series has zero variance
};

struct ExperimentReport {
  std::vector<CellReport> cells;
  std::vector<CorrelationRow> correlations;
};

/// Recomputes every aggregate of `cell` from its per-query rows.
inline void summarize(CellReport& cell) {
  const auto& rows = cell.queries;
  const double m = static_cast<double>(rows.size());
  auto mean = [&](auto field) {
    double s = 0.0;
    for (const auto& r : rows) s += static_cast<double>(field(r));
    return rows.empty() ? 0.0 : s / m;
  };
  cell.mean_recall = mean([](const QueryRow& r) { return r.recall; });
  cell.mean_hops = mean([](const QueryRow& r) { return r.hops; });
  cell.mean_hops_phase1 = mean([](const QueryRow& r) { return r.phase.hops_phase1; });
  cell.mean_hops_phase2 = mean([](const QueryRow& r) { return r.phase.hops_phase2; });
  for (std::size_t i = 0; i < 3; ++i) {
    cell.mean_scc_size[i] = mean([i](const QueryRow& r) { return r.scc_sizes[i]; });
    cell.mean_scc_ratio[i] = cell.k == 0 ? 0.0 : cell.mean_scc_size[i] / static_cast<double>(cell.k);
  }
  cell.entry_probability = mean([](const QueryRow& r) { return r.phase.entered ? 1.0 : 0.0; });
}

namespace detail {

inline CellReport evaluate_cell(const ExperimentConfig& cfg, ExperimentCache& cache, const DatasetSpec& spec,
                                std::size_t K, EdgeStrategy strategy, std::optional<std::size_t> mod_cap,
                                bool search_queries) {
  const auto& d = cache.dataset(spec, cfg.query_count);
  const auto& table = cache.table(spec, cfg.query_count, K, cfg.threads);
  const auto& truth = cache.truth(spec, cfg.query_count, cfg.k, cfg.threads);
  const auto graph = build_graph(d.base, table, K, strategy, mod_cap, cfg.threads);

  CellReport cell;
  cell.dataset = spec.name;
  cell.n = d.base.size();
  cell.dim = d.base.dim();
  cell.K = K;
  cell.strategy = strategy;
  cell.k = cfg.k;
  cell.mean_out_degree = graph.mean_out_degree();
  cell.queries.resize(d.queries.size());

  std::vector<SearchTrace> traces;
  if (search_queries) {
    cell.clustering = clustering_report(graph, cfg.threads).global;
    traces = batch_search(graph, d.base, d.queries, SearchParams{cfg.k, cfg.L, RandomEntry{cfg.seed}}, cfg.threads);
  }
  parallel_for(d.queries.size(), cfg.threads, [&](std::size_t i) {
    auto& row = cell.queries[i];
    row.query_id = i;
    const auto scc = scc_decompose(induced_subgraph(graph, ids_of(truth[i])));
    for (std::size_t r = 0; r < 3; ++r) row.scc_sizes[r] = scc.size_at(r);
    if (!search_queries) return;
    const auto& trace = traces[i];
    row.recall = recall(trace.result, truth[i]);
    row.hops = trace.hop_count();
    row.phase = phase_split(trace, scc, truth[i]);
    row.premise_holds = traversal_premise_holds(graph, d.base, d.queries[i], scc.max_component());
  });
  summarize(cell);
  return cell;
}

inline std::size_t max_K(const ExperimentConfig& cfg) {
  return *std::max_element(cfg.K_values.begin(), cfg.K_values.end());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Runners

struct CcRow {
  std::string dataset;
  std::size_t K = 0;
  EdgeStrategy strategy = EdgeStrategy::DirectedKnn;
  double clustering = 0.0;
};

/// Global clustering coefficient for every (dataset, K, strategy), sorted by
/// dataset name, then K, then strategy.
inline std::vector<CcRow> run_cc_vs_k(const ExperimentConfig& cfg, ExperimentCache* shared = nullptr) {
  cfg.validate();
  ExperimentCache local;
  auto& cache = shared ? *shared : local;
  std::vector<CcRow> rows;
  for (const auto& spec : cfg.datasets) {
    const auto& d = cache.dataset(spec, cfg.query_count);
    const auto& table = cache.table(spec, cfg.query_count, detail::max_K(cfg), cfg.threads);
    for (auto K : cfg.K_values) {
      for (auto s : cfg.strategies) {
        const auto g = build_graph(d.base, table, K, s, cfg.mod_cap, cfg.threads);
        rows.push_back({spec.name, K, s, clustering_report(g, cfg.threads).global});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const CcRow& a, const CcRow& b) {
    return std::tie(a.dataset, a.K, a.strategy) < std::tie(b.dataset, b.K, b.strategy);
  });
  return rows;
}

/// Per dataset: graph, clustering coefficient, searches of the held-out queries
/// and recall against exact ground truth; then Pearson(CC, recall) across
/// datasets for each (K, strategy).
inline ExperimentReport run_cc_vs_recall(const ExperimentConfig& cfg, ExperimentCache* shared = nullptr) {
  cfg.validate();
  if (cfg.datasets.size() < 2) throw InvalidArgument("CC-vs-recall correlation needs at least two datasets");
  ExperimentCache local;
  auto& cache = shared ? *shared : local;
  ExperimentReport report;
  for (const auto& spec : cfg.datasets) {
    for (auto K : cfg.K_values) {
      for (auto s : cfg.strategies) {
        report.cells.push_back(detail::evaluate_cell(cfg, cache, spec, K, s, cfg.mod_cap, true));
      }
    }
  }
  for (auto K : cfg.K_values) {
    for (auto s : cfg.strategies) {
      std::vector<double> cc, rec;
      for (const auto& c : report.cells) {
        if (c.K == K && c.strategy == s) {
          cc.push_back(c.clustering);
          rec.push_back(c.mean_recall);
        }
      }
      CorrelationRow row{K, s, cc.size(), std::nullopt};
      try {
        row.pearson = pearson(cc, rec);
      } catch (const InvalidArgument&) {
        // Zero variance: correlation undefined, reported as empty.
      }
      report.correlations.push_back(row);
    }
  }
  return report;
}

/// Sizes of the three largest SCCs of each query's k-neighborhood subgraph, on
/// exact (uncapped) DirectedKnn and UndirectedKnn graphs.
inline ExperimentReport run_scc_tables(const ExperimentConfig& cfg, ExperimentCache* shared = nullptr) {
  cfg.validate();
  ExperimentCache local;
  auto& cache = shared ? *shared : local;
  ExperimentReport report;
  for (const auto& spec : cfg.datasets) {
    for (auto K : cfg.K_values) {
      for (auto s : {EdgeStrategy::DirectedKnn, EdgeStrategy::UndirectedKnn}) {
        report.cells.push_back(detail::evaluate_cell(cfg, cache, spec, K, s, std::nullopt, false));
      }
    }
  }
  return report;
}

/// Per-query two-phase statistics for every (dataset, K, strategy).
inline ExperimentReport run_two_phase(const ExperimentConfig& cfg, ExperimentCache* shared = nullptr) {
  cfg.validate();
  ExperimentCache local;
  auto& cache = shared ? *shared : local;
  ExperimentReport report;
  for (const auto& spec : cfg.datasets) {
    for (auto K : cfg.K_values) {
      for (auto s : cfg.strategies) {
        report.cells.push_back(detail::evaluate_cell(cfg, cache, spec, K, s, cfg.mod_cap, true));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Serialization

inline void write_cc_vs_k_csv(std::ostream& out, const std::vector<CcRow>& rows) {
  out << "dataset,K,strategy,clustering_coefficient\n";
  for (const auto& r : rows) {
    out << r.dataset << ',' << r.K << ',' << strategy_name(r.strategy) << ',' << detail::format_double(r.clustering)
        << '\n';
  }
}

/// Dataset, size, dim, clustering coefficient, recall, hops.
inline void write_cc_vs_recall_csv(std::ostream& out, const ExperimentReport& report) {
  out << "dataset,size,dim,K,strategy,clustering_coefficient,recall,hops\n";
  for (const auto& c : report.cells) {
    out << c.dataset << ',' << c.n << ',' << c.dim << ',' << c.K << ',' << strategy_name(c.strategy) << ','
        << detail::format_double(c.clustering) << ',' << detail::format_double(c.mean_recall) << ','
        << detail::format_double(c.mean_hops) << '\n';
  }
}

/// Pearson(CC, recall) across datasets per (K, strategy); empty when undefined.
inline void write_correlation_csv(std::ostream& out, const ExperimentReport& report) {
  out << "K,strategy,datasets,pearson\n";
  for (const auto& c : report.correlations) {
    out << c.K << ',' << strategy_name(c.strategy) << ',' << c.datasets << ','
        << (c.pearson ? detail::format_double(*c.pearson) : std::string()) << '\n';
  }
}

/// SCC-id, size, ratio for the three largest components (means over queries).
inline void write_scc_table_csv(std::ostream& out, const CellReport& cell) {
  out << "scc_id,size,ratio\n";
  for (std::size_t i = 0; i < 3; ++i) {
    out << "SCC" << (i + 1) << ',' << detail::format_double(cell.mean_scc_size[i]) << ','
        << detail::format_double(cell.mean_scc_ratio[i]) << '\n';
  }
}

inline void write_scc_queries_csv(std::ostream& out, const CellReport& cell) {
  out << "query_id,scc1,scc2,scc3\n";
  for (const auto& r : cell.queries) {
    out << r.query_id << ',' << r.scc_sizes[0] << ',' << r.scc_sizes[1] << ',' << r.scc_sizes[2] << '\n';
  }
}

/// Query id, hops in phase 1, hops in phase 2, |C_k(q)|, fraction of C_k(q)
/// visited, true neighbors found outside C_k(q); then diagnostic columns. The
/// last row holds the means.
inline void write_two_phase_csv(std::ostream& out, const CellReport& cell) {
  out << "query_id,hops_p1,hops_p2,scc_size,fraction_visited,extra_true_nn,entered,premise_holds,recall\n";
  double frac = 0.0, extra = 0.0, size = 0.0, premise = 0.0;
  for (const auto& r : cell.queries) {
    out << r.query_id << ',' << r.phase.hops_phase1 << ',' << r.phase.hops_phase2 << ',' << r.phase.scc_size << ','
        << detail::format_double(r.phase.scc_fraction_visited) << ',' << r.phase.extra_true_nn << ','
        << (r.phase.entered ? 1 : 0) << ',' << (r.premise_holds ? 1 : 0) << ','
        << detail::format_double(r.recall) << '\n';
    frac += r.phase.scc_fraction_visited;
    extra += static_cast<double>(r.phase.extra_true_nn);
    size += static_cast<double>(r.phase.scc_size);
    premise += r.premise_holds ? 1.0 : 0.0;
  }
  const double m = cell.queries.empty() ? 1.0 : static_cast<double>(cell.queries.size());
  out << "mean," << detail::format_double(cell.mean_hops_phase1) << ',' << detail::format_double(cell.mean_hops_phase2)
      << ',' << detail::format_double(size / m) << ',' << detail::format_double(frac / m) << ','
      << detail::format_double(extra / m) << ',' << detail::format_double(cell.entry_probability) << ','
      << detail::format_double(premise / m) << ',' << detail::format_double(cell.mean_recall) << '\n';
}

inline nlohmann::json to_json(const CellReport& c, bool with_queries = true) {
  nlohmann::json j{{"dataset", c.dataset},
                   {"n", c.n},
                   {"dim", c.dim},
                   {"K", c.K},
                   {"strategy", strategy_name(c.strategy)},
                   {"k", c.k},
                   {"clustering_coefficient", c.clustering},
                   {"mean_out_degree", c.mean_out_degree},
                   {"mean_recall", c.mean_recall},
                   {"mean_hops", c.mean_hops},
                   {"mean_hops_phase1", c.mean_hops_phase1},
                   {"mean_hops_phase2", c.mean_hops_phase2},
                   {"mean_scc_size", c.mean_scc_size},
                   {"mean_scc_ratio", c.mean_scc_ratio},
                   {"entry_probability", c.entry_probability}};
  if (with_queries) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : c.queries) {
      rows.push_back({{"query_id", r.query_id},
                      {"recall", r.recall},
                      {"hops", r.hops},
                      {"hops_phase1", r.phase.hops_phase1},
                      {"hops_phase2", r.phase.hops_phase2},
                      {"entered", r.phase.entered},
                      {"scc_fraction_visited", r.phase.scc_fraction_visited},
                      {"extra_true_nn", r.phase.extra_true_nn},
                      {"scc_sizes", r.scc_sizes},
                      {"premise_holds", r.premise_holds}});
    }
    j["queries"] = std::move(rows);
  }
  return j;
}

inline nlohmann::json to_json(const ExperimentReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells) cells.push_back(to_json(c));
  nlohmann::json corr = nlohmann::json::array();
  for (const auto& c : r.correlations) {
    corr.push_back({{"K", c.K},
                    {"strategy", strategy_name(c.strategy)},
                    {"datasets", c.datasets},
                    {"pearson", c.pearson ? nlohmann::json(*c.pearson) : nlohmann::json(nullptr)}});
  }
  return {{"cells", std::move(cells)}, {"correlations", std::move(corr)}};
}

inline nlohmann::json to_json(const std::vector<CcRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"dataset", r.dataset}, {"K", r.K}, {"strategy", strategy_name(r.strategy)},
                   {"clustering_coefficient", r.clustering}});
  }
  return out;
}

/// File-name stem encoding (dataset, K, strategy).
inline std::string cell_stem(std::string_view table, const CellReport& c) {
  return std::string(table) + "__" + c.dataset + "__K" + std::to_string(c.K) + "__" +
         std::string(strategy_name(c.strategy));
}

/// Writes report files into a directory and records them in manifest.json.
/// Files are written through a temporary name; if the writer is destroyed
/// before finish(), everything it wrote is removed again.
class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path dir, std::string table, const ExperimentConfig& cfg)
      : dir_(std::move(dir)), table_(std::move(table)), config_(to_json(cfg)), hash_(config_hash(cfg)) {
    std::filesystem::create_directories(dir_);
  }
  ArtifactWriter(const ArtifactWriter&) = delete;
  ArtifactWriter& operator=(const ArtifactWriter&) = delete;

  ~ArtifactWriter() {
    if (finished_) return;
    std::error_code ec;
    for (const auto& p : written_) std::filesystem::remove(p, ec);
  }

  void write(const std::string& file_name, const std::string& content) {
    const auto path = dir_ / file_name;
    write_atomically(path, content);
    written_.push_back(path);
    artifacts_.push_back({{"path", file_name}, {"bytes", content.size()}, {"fnv1a64", hex64(fnv1a64(content))}});
  }

  template <typename Fn>
  void write_with(const std::string& file_name, Fn&& fn) {
    std::ostringstream os;
    fn(os);
    write(file_name, os.str());
  }

  /// Writes manifest.json and returns its contents.
  nlohmann::json finish() {
    nlohmann::json manifest{{"table", table_}, {"config", config_}, {"config_hash", hash_}, {"artifacts", artifacts_}};
    write_atomically(dir_ / "manifest.json", manifest.dump(2) + "\n");
    finished_ = true;
    return manifest;
  }

  const std::filesystem::path& dir() const noexcept { return dir_; }

  static void write_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      if (!out) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw Error("cannot write " + path.string());
      }
    }
    std::filesystem::rename(tmp, path);
  }

 private:
  std::filesystem::path dir_;
  std::string table_;
  nlohmann::json config_;
  std::string hash_;
  nlohmann::json artifacts_ = nlohmann::json::array();
  std::vector<std::filesystem::path> written_;
  bool finished_ = false;
};

}  // namespace knng
