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

// Search traces as JSON lines, one object per query:
//   {"query": 3, "entry": 17, "hops": 25, "pops": [[17, 4.25], ...], "result": [5, 9, ...]}

#pragma once

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "knng/search.hpp"
#include "knng/vecs_io.hpp"

namespace knng {

inline nlohmann::json trace_to_json(const SearchTrace& trace, std::size_t query_index) {
  nlohmann::json pops = nlohmann::json::array();
  for (const auto& p : trace.pops) pops.push_back({p.id, p.distance});
  nlohmann::json result = nlohmann::json::array();
  for (const auto& r : trace.result) result.push_back(r.id);
  return {{"query", query_index}, {"entry", trace.entry_vertex}, {"hops", trace.hop_count()},
          {"pops", std::move(pops)}, {"result", std::move(result)}};
}

inline void write_traces_jsonl(std::ostream& out, std::span<const SearchTrace> traces) {
  for (std::size_t i = 0; i < traces.size(); ++i) out << trace_to_json(traces[i], i).dump() << '\n';
}

/// Result ids per query, for the ivecs output of the search command.
inline IntRows result_ids(std::span<const SearchTrace> traces) {
  IntRows rows;
  rows.reserve(traces.size());
  for (const auto& t : traces) {
    auto& row = rows.emplace_back();
    for (const auto& r : t.result) row.push_back(static_cast<std::int32_t>(r.id));
  }
  return rows;
}

}  // namespace knng
