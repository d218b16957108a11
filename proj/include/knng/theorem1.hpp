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

// Empirical check of the traversal guarantee: started from any member of the
// maximum strongly connected neighborhood C_k(q), search with L = k expands
// every member of C_k(q), provided no out-neighbor of C_k(q) outside it is
// closer to q than a member.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "knng/graph.hpp"
#include "knng/scc.hpp"
#include "knng/search.hpp"
#include "knng/two_phase.hpp"

namespace knng {

struct TraversalFailure {
  VertexId entry = kInvalidVertex;
  std::vector<VertexId> missed;  ///< members of C_k(q) never expanded
};

struct TraversalCheck {
  std::vector<VertexId> component;  ///< C_k(q)
  bool premise_holds = false;
  std::vector<TraversalFailure> failures;

  bool passed() const noexcept { return failures.empty(); }
};

/// Computes C_k(q), evaluates the premise, then searches with L = k from every
/// member and records the members each run failed to expand.
inline TraversalCheck check_traversal(const KnnGraph& g, const VectorDataset& data, std::span<const float> q,
                                      std::size_t k) {
  TraversalCheck check;
  check.component = scc_decompose(neighborhood_subgraph(g, data, q, k)).max_component();
  check.premise_holds = traversal_premise_holds(g, data, q, check.component);
  for (VertexId entry : check.component) {
    const auto trace = search(g, data, q, SearchParams{k, k, FixedEntry{entry}});
    std::vector<VertexId> popped = ids_of(trace.pops);
    std::sort(popped.begin(), popped.end());
    TraversalFailure failure{entry, {}};
    for (VertexId c : check.component) {
      if (!std::binary_search(popped.begin(), popped.end(), c)) failure.missed.push_back(c);
    }
    if (!failure.missed.empty()) check.failures.push_back(std::move(failure));
  }
  return check;
}

/// A random dataset with a tight cluster planted around the query.
struct PlantedInstance {
  VectorDataset data;
  KnnGraph graph;
  std::vector<float> query;
  std::size_t k = 0;
  std::size_t planted = 0;
};

struct PlantedRecipe {
  std::size_t dim = 0;
  std::size_t background = 0;
  std::size_t k = 0;
  std::size_t planted = 0;
  std::size_t K = 0;
  EdgeStrategy strategy = EdgeStrategy::DirectedKnn;
  std::uint64_t seed = 0;
};

inline PlantedInstance make_planted_instance(const PlantedRecipe& r) {
  std::mt19937_64 rng(detail::splitmix64(r.seed));
  std::vector<float> query(r.dim);
  for (auto& x : query) x = detail::unit_float(rng);

  const auto background = generate_synthetic(SyntheticKind::Uniform, r.background, r.dim, {}, rng());
  std::vector<float> all(background.values().begin(), background.values().end());
  // Cluster radius ~1e-3 per component: far tighter than background spacing.
  std::normal_distribution<double> jitter(0.0, 1e-3);
  for (std::size_t p = 0; p < r.planted; ++p) {
    for (std::size_t c = 0; c < r.dim; ++c) all.push_back(static_cast<float>(query[c] + jitter(rng)));
  }
  PlantedInstance inst{VectorDataset(r.dim, std::move(all), "planted"), {}, std::move(query), r.k, r.planted};
  const std::size_t K = std::min(r.K, inst.data.size() - 1);
  inst.graph = build_graph(inst.data, K, r.strategy, std::nullopt, 1);
  return inst;
}

struct TraversalCounterexample {
  std::size_t trial = 0;
  PlantedRecipe recipe;
  TraversalCheck check;
};

struct Theorem1Report {
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::size_t perturbations = 0;  ///< re-plantings needed to satisfy the premise
  std::vector<TraversalCounterexample> counterexamples;

  bool all_passed() const noexcept { return passed == trials; }
};

/// Runs `trials` planted instances. Each starts from a random recipe; while the
/// premise fails, the cluster is re-planted larger, and finally as a full k-clique
/// under DirectedKnn, where the premise holds by construction.
inline Theorem1Report verify_theorem1(std::size_t trials, std::uint64_t seed) {
  Theorem1Report report;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(detail::mix_seed(seed, t));
    auto uniform = [&](std::size_t lo, std::size_t hi) {
      return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    PlantedRecipe recipe;
    recipe.dim = uniform(2, 8);
    recipe.background = uniform(50, 200);
    recipe.k = uniform(3, 10);
    recipe.planted = uniform(1, recipe.k);
    recipe.K = uniform(std::max<std::size_t>(1, recipe.planted), recipe.k + 5);
    recipe.strategy = kAllStrategies[uniform(0, 3)];
    recipe.seed = rng();

    for (std::size_t attempt = 0;; ++attempt) {
      if (attempt == 1000) throw Error("trial " + std::to_string(t) + ": could not plant a premise-satisfying instance");
      const auto inst = make_planted_instance(recipe);
      auto check = check_traversal(inst.graph, inst.data, inst.query, inst.k);
      if (check.premise_holds) {
        if (check.passed()) {
          ++report.passed;
        } else {
          report.counterexamples.push_back({t, recipe, std::move(check)});
        }
        break;
      }
      ++report.perturbations;
      recipe.seed = rng();
      if (recipe.planted < recipe.k) {
        ++recipe.planted;
        recipe.K = std::max(recipe.K, recipe.planted);
      } else {
        recipe.strategy = EdgeStrategy::DirectedKnn;
        recipe.K = std::max(recipe.K, recipe.k);
      }
    }
  }
  return report;
}

inline nlohmann::json to_json(const Theorem1Report& r) {
  nlohmann::json cx = nlohmann::json::array();
  for (const auto& c : r.counterexamples) {
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : c.check.failures) failures.push_back({{"entry", f.entry}, {"missed", f.missed}});
    cx.push_back({{"trial", c.trial},
                  {"dim", c.recipe.dim},
                  {"background", c.recipe.background},
                  {"k", c.recipe.k},
                  {"planted", c.recipe.planted},
                  {"K", c.recipe.K},
                  {"strategy", strategy_name(c.recipe.strategy)},
                  {"seed", c.recipe.seed},
                  {"component", c.check.component},
                  {"failures", std::move(failures)}});
  }
  return {{"trials", r.trials},
          {"passed", r.passed},
          {"perturbations", r.perturbations},
          {"counterexamples", std::move(cx)}};
}

}  // namespace knng
