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


// knng: generate datasets, build graphs, search them and emit analysis tables.
// Machine-readable summaries go to stdout as JSON; diagnostics go to stderr.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "knng/knng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Removes `path` unless commit() is called.
class PendingFile {
 public:
  explicit PendingFile(fs::path path) : path_(std::move(path)), tmp_(path_) { tmp_ += ".tmp"; }
  ~PendingFile() {
    std::error_code ec;
    fs::remove(tmp_, ec);
  }
  const fs::path& tmp() const { return tmp_; }
  void commit() { fs::rename(tmp_, path_); }

 private:
  fs::path path_;
  fs::path tmp_;
};

std::optional<std::size_t> parse_cap(const std::string& text) {
  if (text == "none") return std::nullopt;
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || v == 0) {
    throw knng::InvalidArgument("--cap must be a positive integer or 'none'");
  }
  return v;
}

void log(const std::string& msg) { std::cerr << "knng: " << msg << '\n'; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct GenerateArgs {
  std::string kind = "uniform";
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t clusters = 20;
  double sigma = 0.35;
  std::uint64_t seed = 0;
  std::string out;
};

struct BuildArgs {
  std::string input;
  std::size_t K = knng::kDefaultBuildK;
  std::string strategy = "undirected";
  std::string cap = "70";
  std::string out;
};

struct SearchArgs {
  std::string graph;
  std::string data;
  std::string queries;
  std::size_t k = 20;
  std::size_t L = 20;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> entry;
  std::string format = "jsonl";
  std::string out;
};

struct AnalyzeArgs {
  std::string table;
  std::vector<std::string> datasets;
  std::vector<std::size_t> K{20};
  std::vector<std::string> strategies{"undirected"};
  std::string cap = "70";
  std::size_t queries = 100;
  std::size_t k = 20;
  std::size_t L = 20;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t trials = 200;
};

json run_generate(const GenerateArgs& a) {
  const auto kind = a.kind == "uniform" ? knng::SyntheticKind::Uniform : knng::SyntheticKind::GaussianClusters;
  const auto data = knng::generate_synthetic(kind, a.n, a.dim, {a.clusters, a.sigma}, a.seed);
  const fs::path out(a.out);
  PendingFile file(out);
  knng::write_vectors(file.tmp(), data, knng::format_from_path(out));
  file.commit();
  return {{"command", "generate"}, {"kind", data.name()}, {"n", data.size()}, {"dim", data.dim()},
          {"seed", a.seed},        {"out", a.out}};
}

json run_build(const BuildArgs& a, std::size_t threads) {
  const auto data = knng::load_vectors(a.input);
  const auto strategy = knng::parse_strategy(a.strategy);
  const auto cap = parse_cap(a.cap);
  log("building " + a.strategy + " graph, n=" + std::to_string(data.size()) + " K=" + std::to_string(a.K));
  const auto t0 = std::chrono::steady_clock::now();
  const auto graph = knng::build_graph(data, a.K, strategy, cap, threads);
  const double elapsed = seconds_since(t0);
  PendingFile file{fs::path(a.out)};
  knng::save_graph(graph, file.tmp());
  file.commit();
  return {{"command", "build"},
          {"n", graph.size()},
          {"K", a.K},
          {"strategy", knng::strategy_name(strategy)},
          {"mod_cap", cap ? json(*cap) : json(nullptr)},
          {"edges", graph.edge_count()},
          {"mean_out_degree", graph.mean_out_degree()},
          {"build_seconds", elapsed},
          {"out", a.out}};
}

json run_search(const SearchArgs& a, std::size_t threads) {
  if (a.L < a.k) throw CLI::ValidationError("--L", "L must be at least k");
  const auto graph = knng::load_graph(a.graph);
  const auto data = knng::load_vectors(a.data);
  const auto queries = knng::load_vectors(a.queries);
  if (graph.size() != data.size()) {
    throw knng::InvalidArgument("graph has " + std::to_string(graph.size()) + " vertices but " + a.data + " has " +
                                std::to_string(data.size()) + " vectors");
  }
  if (queries.dim() != data.dim()) {
    throw knng::InvalidArgument("query dimension " + std::to_string(queries.dim()) + " differs from data dimension " +
                                std::to_string(data.dim()));
  }
  knng::SearchParams params{a.k, a.L, knng::RandomEntry{a.seed.value_or(0)}};
  if (a.entry) params.entry = knng::FixedEntry{*a.entry};
  const auto traces = knng::batch_search(graph, data, queries, params, threads);

  PendingFile file{fs::path(a.out)};
  if (a.format == "jsonl") {
    std::ofstream out(file.tmp(), std::ios::binary | std::ios::trunc);
    knng::write_traces_jsonl(out, traces);
    if (!out) throw knng::Error("cannot write " + a.out);
  } else {
    knng::write_ivecs(file.tmp(), knng::result_ids(traces));
  }
  file.commit();

  double hops = 0.0;
  for (const auto& t : traces) hops += static_cast<double>(t.hop_count());
  return {{"command", "search"}, {"queries", traces.size()}, {"k", a.k}, {"L", a.L},
          {"mean_hops", hops / static_cast<double>(traces.size())}, {"format", a.format}, {"out", a.out}};
}

json run_analyze(const AnalyzeArgs& a, std::size_t threads) {
  const auto table = knng::parse_table(a.table);
  knng::ExperimentConfig cfg;
  for (const auto& d : a.datasets) {
    for (auto& spec : knng::expand_dataset_arg(d, a.seed)) cfg.datasets.push_back(std::move(spec));
  }
  cfg.K_values = a.K;
  cfg.strategies.clear();
  for (const auto& s : a.strategies) cfg.strategies.push_back(knng::parse_strategy(s));
  cfg.mod_cap = parse_cap(a.cap);
  cfg.query_count = a.queries;
  cfg.k = a.k;
  cfg.L = a.L;
  cfg.seed = a.seed;
  cfg.threads = threads;
  if (table != knng::ReportTable::Theorem1 && cfg.datasets.empty()) {
    throw CLI::RequiredError("--dataset");
  }
  log("running " + a.table + " into " + a.out_dir);
  auto manifest = knng::emit_table(table, cfg, a.trials, a.out_dir);
  manifest["command"] = "analyze";
  manifest["out_dir"] = a.out_dir;
  return manifest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knng: exact k-nearest-neighbor graphs, graph search and structure analysis"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a key=value config file; flags override it");
  app.allow_config_extras(false);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->envname("KNNG_THREADS");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset (.fvecs or .csv)");
  generate->add_option("--kind", gen.kind)->check(CLI::IsMember({"uniform", "gaussian"}));
  generate->add_option("--n", gen.n)->required()->check(CLI::PositiveNumber);
  generate->add_option("--dim", gen.dim)->required()->check(CLI::PositiveNumber);
  generate->add_option("--clusters", gen.clusters)->check(CLI::PositiveNumber);
  generate->add_option("--sigma", gen.sigma)->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed)->required();
  generate->add_option("--out", gen.out)->required();

  BuildArgs bld;
  auto* build = app.add_subcommand("build", "Build a graph over a vector file");
  build->add_option("--input", bld.input)->required()->check(CLI::ExistingFile);
  build->add_option("--k", bld.K, "Neighbors per vertex")->check(CLI::PositiveNumber);
  build->add_option("--strategy", bld.strategy)->check(CLI::IsMember({"directed", "undirected", "rng", "mrng"}));
  build->add_option("--cap", bld.cap, "Out-degree cap, or 'none'");
  build->add_option("--out", bld.out)->required();

  SearchArgs srch;
  auto* search = app.add_subcommand("search", "Search a graph with a batch of queries");
  search->add_option("--graph", srch.graph)->required()->check(CLI::ExistingFile);
  search->add_option("--data", srch.data)->required()->check(CLI::ExistingFile);
  search->add_option("--queries", srch.queries)->required()->check(CLI::ExistingFile);
  search->add_option("--k", srch.k)->check(CLI::PositiveNumber);
  search->add_option("--L", srch.L)->check(CLI::PositiveNumber);
  auto* seed_opt = search->add_option("--seed", srch.seed, "Seed for random entry vertices");
  auto* entry_opt = search->add_option("--entry", srch.entry, "Fixed entry vertex");
  seed_opt->excludes(entry_opt);
  search->add_option("--format", srch.format)->check(CLI::IsMember({"jsonl", "ivecs"}));
  search->add_option("--out", srch.out)->required();

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Run an analysis table and write CSV/JSON reports");
  analyze->add_option("--table", an.table)
      ->required()
      ->check(CLI::IsMember({"cc-vs-k", "cc-vs-recall", "scc", "two-phase", "theorem1"}));
  analyze->add_option("--dataset", an.datasets,
                      "uniform:..., gaussian:..., file:path=... or ladder[:n=N,dim=D]; repeatable");
  analyze->add_option("--K", an.K)->check(CLI::PositiveNumber);
  analyze->add_option("--strategy", an.strategies)->check(CLI::IsMember({"directed", "undirected", "rng", "mrng"}));
  analyze->add_option("--cap", an.cap, "Out-degree cap, or 'none'");
  analyze->add_option("--queries", an.queries)->check(CLI::PositiveNumber);
  analyze->add_option("--k", an.k)->check(CLI::PositiveNumber);
  analyze->add_option("--L", an.L)->check(CLI::PositiveNumber);
  analyze->add_option("--seed", an.seed)->required();
  analyze->add_option("--out-dir", an.out_dir)->required();
  analyze->add_option("--trials", an.trials, "theorem1 only")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
    if (*search && !*seed_opt && !*entry_opt) throw CLI::RequiredError("--seed or --entry");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    json summary;
    if (*generate) {
      summary = run_generate(gen);
    } else if (*build) {
      summary = run_build(bld, threads);
    } else if (*search) {
      summary = run_search(srch, threads);
    } else {
      summary = run_analyze(an, threads);
    }
    std::cout << summary.dump() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::exception& e) {
    log(std::string("error: ") + e.what());
    return 1;
  }
}
