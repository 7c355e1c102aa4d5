#include "spmdiag/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include "spmdiag/decision_builder.hpp"
#include "spmdiag/errors.hpp"

namespace spmdiag {

using nlohmann::json;

DiagnosisReport analyze(const TraceSet& trace, const AnalysisConfig& config) {
  if (trace.process_count() < 2) throw ValidationError("analysis needs at least two processes");

  DiagnosisReport report;
  report.trace_label = trace.metadata().label;
  report.process_count = trace.process_count();

  const auto vectors = build_vectors(trace);
  report.severity = severity(vectors);
  report.ccr = find_cccr(trace, config.process_params);
  report.partition = report.ccr.baseline;
  report.warnings = report.ccr.warnings;
  if (report.ccr.no_problem) return report;

  std::set<RegionId> seen;
  for (const auto& group : report.ccr.cccrs()) {
    for (RegionId r : group) {
      if (seen.insert(r).second) report.core_regions.push_back(r);
    }
  }
  if (report.core_regions.empty()) return report;

  std::vector<std::string> skipped;
  const auto specs = default_attribute_specs(trace, report.core_regions, config.attribute_params, &skipped);
  for (auto& s : skipped) report.warnings.push_back("skipped " + s);
  if (specs.empty()) {
    report.warnings.push_back("no accessory metrics recorded in the core regions; causes not extracted");
    return report;
  }
  report.decision_table = build_decision_table(trace, report.core_regions, report.partition, specs);
  report.matrix = build_matrix(*report.decision_table);
  report.core = extract_core(*report.matrix);
  for (const auto& w : report.core->warnings) report.warnings.push_back(w);
  return report;
}

// ---------------------------------------------------------------------------
// Text rendering

namespace {

std::string region_text(const std::vector<RegionId>& regions) {
  if (regions.size() == 1) return "region " + std::to_string(regions.front());
  std::string out = "regions ";
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (i) out += '+';
    out += std::to_string(regions[i]);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::vector<ChainLink>> chain_links(const CcrTree& tree) {
  std::vector<std::vector<ChainLink>> out;
  for (const auto& path : tree.chains()) {
    std::vector<ChainLink> links;
    for (auto i : path) {
      const auto& n = tree.nodes[i];
      links.push_back(ChainLink{n.regions, n.level, n.is_cccr});
    }
    out.push_back(std::move(links));
  }
  return out;
}

}  // namespace

std::string render_chain(const std::vector<ChainLink>& chain) {
  std::vector<std::string> parts;
  for (const auto& link : chain) {
    std::string tag = std::to_string(link.level) + "-CCR";
    if (link.is_cccr) tag += " & CCCR";
    parts.push_back(region_text(link.regions) + " (" + tag + ")");
  }
  return join(parts, " ---> ");
}

void render_text(std::ostream& out, const DiagnosisReport& report) {
  const DiagnosisSummary s = summarize(report);
  out << "Performance similarity\n";
  out << "there are " << s.kinds.size() << " kinds of processes\n";
  for (std::size_t k = 0; k < s.kinds.size(); ++k) {
    out << "kind " << k << ":";
    for (Rank r : s.kinds[k]) out << ' ' << r;
    out << '\n';
  }
  out << "dissimilarity severity: " << fixed6(s.severity) << '\n';
  if (s.no_problem) {
    out << "no external performance problem\n";
  } else {
    std::vector<std::string> cores;
    for (const auto& c : s.cccrs) cores.push_back(region_text(c));
    out << "CCCR: " << (cores.empty() ? std::string("none") : join(cores, ", ")) << '\n';
    out << "CCR tree:\n";
    for (const auto& chain : s.chains) out << render_chain(chain) << '\n';
  }

  if (report.decision_table) {
    // Short aliases keep the matrix readable; the legend maps them back.
    const auto& table = *report.decision_table;
    std::vector<std::string> aliases;
    for (std::size_t a = 0; a < table.attribute_count(); ++a) aliases.push_back("a" + std::to_string(a + 1));
    const DecisionTable aliased(aliases, table.entries());

    out << "\nDissimilarity extraction\n";
    out << "attributes:\n";
    for (std::size_t a = 0; a < aliases.size(); ++a) {
      out << "  " << aliases[a] << " = " << table.attribute_names()[a] << '\n';
    }
    out << "decision table:\n";
    write_decision_table(out, aliased);
    out << "discernibility matrix:\n";
    print_matrix(out, build_matrix(aliased));

    const auto& core = *report.core;
    std::vector<std::string> alternatives;
    for (auto set : core.cores) {
      std::vector<std::string> named;
      for (auto c : set.columns()) named.push_back(table.attribute_names()[c] + " (" + aliases[c] + ")");
      alternatives.push_back(named.empty() ? std::string("none") : join(named, ", "));
    }
    out << "core attributes: " << (alternatives.empty() ? std::string("none") : join(alternatives, " or ")) << '\n';
  }

  for (const auto& w : s.warnings) out << "warning: " << w << '\n';
}

// ---------------------------------------------------------------------------
// Summary / JSON

DiagnosisSummary summarize(const DiagnosisReport& report) {
  DiagnosisSummary s;
  s.trace_label = report.trace_label;
  s.kinds = report.partition.classes();
  s.severity = report.severity.severity;
  s.no_problem = report.ccr.no_problem;
  s.cccrs = report.ccr.cccrs();
  s.chains = chain_links(report.ccr);
  if (report.decision_table) {
    s.attributes = report.decision_table->attribute_names();
    for (const auto& e : report.decision_table->entries()) {
      auto row = e.values;
      row.push_back(e.decision);
      s.decision_rows.push_back(std::move(row));
    }
  }
  if (report.core) {
    for (auto c : report.core->cores) s.cores.push_back(report.core->names(c));
  }
  s.warnings = report.warnings;
  return s;
}

json to_json(const DiagnosisSummary& s) {
  json doc;
  doc["format"] = "spmdiag-result";
  doc["version"] = 1;
  doc["trace_label"] = s.trace_label;
  doc["kinds"] = s.kinds;
  doc["severity"] = s.severity;
  doc["no_problem"] = s.no_problem;
  doc["cccrs"] = s.cccrs;
  json chains = json::array();
  for (const auto& chain : s.chains) {
    json links = json::array();
    for (const auto& l : chain) links.push_back({{"regions", l.regions}, {"level", l.level}, {"is_cccr", l.is_cccr}});
    chains.push_back(std::move(links));
  }
  doc["ccr_chains"] = std::move(chains);
  doc["attributes"] = s.attributes;
  doc["decision_rows"] = s.decision_rows;
  doc["cores"] = s.cores;
  doc["warnings"] = s.warnings;
  return doc;
}

DiagnosisSummary summary_from_json(const json& doc) {
  try {
    if (doc.at("format").get<std::string>() != "spmdiag-result") throw ParseError("not a result document");
    DiagnosisSummary s;
    s.trace_label = doc.at("trace_label").get<std::string>();
    s.kinds = doc.at("kinds").get<std::vector<std::vector<Rank>>>();
    s.severity = doc.at("severity").get<double>();
    s.no_problem = doc.at("no_problem").get<bool>();
    s.cccrs = doc.at("cccrs").get<std::vector<std::vector<RegionId>>>();
    for (const auto& chain : doc.at("ccr_chains")) {
      std::vector<ChainLink> links;
      for (const auto& l : chain) {
        links.push_back(ChainLink{l.at("regions").get<std::vector<RegionId>>(), l.at("level").get<int>(),
                                  l.at("is_cccr").get<bool>()});
      }
      s.chains.push_back(std::move(links));
    }
    s.attributes = doc.at("attributes").get<std::vector<std::string>>();
    s.decision_rows = doc.at("decision_rows").get<std::vector<std::vector<std::string>>>();
    s.cores = doc.at("cores").get<std::vector<std::vector<std::string>>>();
    s.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed result document: ") + e.what());
  }
}

}  // namespace spmdiag
