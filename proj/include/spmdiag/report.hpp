#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spmdiag/ccr_search.hpp"
#include "spmdiag/config.hpp"
#include "spmdiag/roughset.hpp"
#include "spmdiag/similarity.hpp"

namespace spmdiag {

/// Everything one `analyze` run produces.
struct DiagnosisReport {
  std::string trace_label;
  std::size_t process_count = 0;
  Partition partition;
  SeverityReport severity;
  CcrTree ccr;
  std::vector<RegionId> core_regions;
  std::optional<DecisionTable> decision_table;
  std::optional<DiscernibilityMatrix> matrix;
  std::optional<CoreResult> core;
  std::vector<std::string> warnings;
};

/// Severity on the unmasked vectors, CCR search, then cause extraction over
/// the accessory metrics of the core regions.
DiagnosisReport analyze(const TraceSet& trace, const AnalysisConfig& config);

/// Human-readable report.
void render_text(std::ostream& out, const DiagnosisReport& report);

// ---------------------------------------------------------------------------
// Machine-readable result

struct ChainLink {
  std::vector<RegionId> regions;
  int level = 1;
  bool is_cccr = false;

  friend bool operator==(const ChainLink&, const ChainLink&) = default;
};

struct DiagnosisSummary {
  std::string trace_label;
  std::vector<std::vector<Rank>> kinds;
  double severity = 0.0;
  bool no_problem = false;
  std::vector<std::vector<RegionId>> cccrs;
  std::vector<std::vector<ChainLink>> chains;
  std::vector<std::string> attributes;
  std::vector<std::vector<std::string>> decision_rows;  // values then decision
  std::vector<std::vector<std::string>> cores;
  std::vector<std::string> warnings;

  friend bool operator==(const DiagnosisSummary&, const DiagnosisSummary&) = default;
};

DiagnosisSummary summarize(const DiagnosisReport& report);
nlohmann::json to_json(const DiagnosisSummary& summary);
/// Throws ParseError on a malformed document.
DiagnosisSummary summary_from_json(const nlohmann::json& doc);

/// "region 14 (1-CCR) ---> region 11 (2-CCR & CCCR)"
std::string render_chain(const std::vector<ChainLink>& chain);

}  // namespace spmdiag
