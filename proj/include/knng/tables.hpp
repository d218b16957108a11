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


// Named report tables: runs the matching harness routine and writes its CSV
// and JSON artifacts plus manifest.json into a directory.

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "knng/harness.hpp"
#include "knng/theorem1.hpp"

namespace knng {

enum class ReportTable { CcVsK, CcVsRecall, Scc, TwoPhase, Theorem1 };

inline constexpr std::array<std::string_view, 5> kReportTableNames = {"cc-vs-k", "cc-vs-recall", "scc", "two-phase",
                                                                      "theorem1"};

inline std::string_view table_name(ReportTable t) { return kReportTableNames[static_cast<std::size_t>(t)]; }

inline ReportTable parse_table(std::string_view name) {
  for (std::size_t i = 0; i < kReportTableNames.size(); ++i) {
    if (kReportTableNames[i] == name) return static_cast<ReportTable>(i);
  }
  throw InvalidArgument("unknown table '" + std::string(name) +
                        "' (expected cc-vs-k, cc-vs-recall, scc, two-phase or theorem1)");
}

/// Runs `table` and writes its artifacts into `dir`. `trials` only applies to
/// theorem1, which ignores the datasets. Returns the manifest.
inline nlohmann::json emit_table(ReportTable table, const ExperimentConfig& cfg, std::size_t trials,
                                 const std::filesystem::path& dir, ExperimentCache* cache = nullptr) {
  ArtifactWriter out(dir, std::string(table_name(table)), cfg);
  switch (table) {
    case ReportTable::CcVsK: {
      const auto rows = run_cc_vs_k(cfg, cache);
      out.write_with("cc_vs_k.csv", [&](std::ostream& os) { write_cc_vs_k_csv(os, rows); });
      out.write("cc_vs_k.json", to_json(rows).dump(2) + "\n");
      break;
    }
    case ReportTable::CcVsRecall: {
      const auto report = run_cc_vs_recall(cfg, cache);
      out.write_with("cc_vs_recall.csv", [&](std::ostream& os) { write_cc_vs_recall_csv(os, report); });
      out.write_with("cc_vs_recall_correlation.csv", [&](std::ostream& os) { write_correlation_csv(os, report); });
      for (const auto& cell : report.cells) out.write(cell_stem("cc_vs_recall", cell) + ".json", to_json(cell).dump(2) + "\n");
      out.write("cc_vs_recall.json", to_json(report).dump(2) + "\n");
      break;
    }
    case ReportTable::Scc: {
      const auto report = run_scc_tables(cfg, cache);
      for (const auto& cell : report.cells) {
        out.write_with(cell_stem("scc", cell) + ".csv", [&](std::ostream& os) { write_scc_table_csv(os, cell); });
        out.write_with(cell_stem("scc_queries", cell) + ".csv",
                       [&](std::ostream& os) { write_scc_queries_csv(os, cell); });
      }
      break;
    }
    case ReportTable::TwoPhase: {
      const auto report = run_two_phase(cfg, cache);
      for (const auto& cell : report.cells) {
        out.write_with(cell_stem("two_phase", cell) + ".csv", [&](std::ostream& os) { write_two_phase_csv(os, cell); });
      }
      out.write("two_phase.json", to_json(report).dump(2) + "\n");
      break;
    }
    case ReportTable::Theorem1: {
      const auto report = verify_theorem1(trials, cfg.seed);
      out.write("theorem1.json", to_json(report).dump(2) + "\n");
      break;
    }
  }
  return out.finish();
}

}  // namespace knng
