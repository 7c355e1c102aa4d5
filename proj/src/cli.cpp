#include "spmdiag/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "spmdiag/errors.hpp"
#include "spmdiag/ingest.hpp"
#include "spmdiag/report.hpp"
#include "spmdiag/roughset.hpp"

namespace spmdiag {

namespace {

struct AnalyzeOptions {
  std::string trace_path;
  std::string config_path;
  std::string time_semantics;
  int min_pts = 0;
  std::string threshold;
  std::string output_path;
  std::string format = "text";
  std::string reachability_path;
};

struct GenerateOptions {
  std::string spec_path;
  std::uint64_t seed = 1;
  std::string output_path;
};

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out) {
  AnalysisConfig config = opt.config_path.empty() ? AnalysisConfig{} : load_config(opt.config_path);
  if (!opt.time_semantics.empty()) config.time_semantics = parse_time_semantics(opt.time_semantics);
  if (opt.min_pts != 0) config.process_params.min_pts = opt.min_pts;
  if (!opt.threshold.empty()) config.process_params.threshold = ExtractionThreshold::parse(opt.threshold);
  config.process_params.validate();

  const TraceSet trace = load_trace(opt.trace_path, config.time_semantics);
  const DiagnosisReport report = analyze(trace, config);
  const DiagnosisSummary summary = summarize(report);

  if (opt.format == "structured") {
    out << to_json(summary).dump(2) << '\n';
  } else {
    render_text(out, report);
  }
  if (!opt.output_path.empty()) {
    std::ofstream file(opt.output_path);
    if (!file) throw ValidationError("cannot write result file '" + opt.output_path + "'");
    file << to_json(summary).dump(2) << '\n';
  }
  if (!opt.reachability_path.empty()) {
    std::ofstream file(opt.reachability_path);
    if (!file) throw ValidationError("cannot write reachability plot '" + opt.reachability_path + "'");
    auto vectors = build_vectors(trace);
    std::set<RegionId> nested;
    for (RegionId r : trace.tree().preorder()) {
      if (trace.tree().depth(r) > 1) nested.insert(r);
    }
    std::vector<std::vector<double>> points;
    for (const auto& v : mask_all(vectors, nested)) points.push_back(v.readings());
    write_reachability_plot(file, optics_order(points, config.process_params));
  }
  return kExitOk;
}

int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err) {
  const SynthSpec spec = load_synth_spec(opt.spec_path);
  const TraceSet trace = generate_trace(spec, opt.seed);

  std::ostream& summary = opt.output_path.empty() ? err : out;
  summary << "spec: " << (spec.label.empty() ? opt.spec_path : spec.label) << '\n'
          << "processes: " << spec.process_count << '\n'
          << "regions: " << spec.regions.size() << '\n'
          << "imbalance injections: " << spec.imbalance.size() << '\n'
          << "accessory metrics: " << spec.accessories.size() << '\n'
          << "noise amplitude: " << spec.noise_amplitude << '\n'
          << "seed: " << opt.seed << '\n';
  if (opt.output_path.empty()) {
    write_trace(out, trace);
  } else {
    save_trace(opt.output_path, trace);
    out << "wrote " << opt.output_path << '\n';
  }
  return kExitOk;
}

int cmd_roughset(const std::string& table_path, std::ostream& out) {
  const DecisionTable table = load_decision_table(table_path);
  const DiscernibilityMatrix m = build_matrix(table);
  const CoreResult core = extract_core(m);

  out << "discernibility matrix:\n";
  print_matrix(out, m);
  std::vector<std::string> singles;
  for (auto c : core.singleton_core.columns()) singles.push_back(core.attribute_names[c]);
  out << "singleton core: {";
  for (std::size_t i = 0; i < singles.size(); ++i) out << (i ? ", " : "") << singles[i];
  out << "}\n";
  out << "conjunctive form:";
  if (core.cnf.empty()) out << " (empty)";
  for (std::size_t i = 0; i < core.cnf.size(); ++i) out << (i ? " ^ " : " ") << "{" << m.format_set(core.cnf[i]) << "}";
  out << '\n';
  out << "cores:";
  for (std::size_t i = 0; i < core.cores.size(); ++i) {
    const auto names = core.names(core.cores[i]);
    out << (i ? " or " : " ") << "{";
    for (std::size_t k = 0; k < names.size(); ++k) out << (k ? ", " : "") << names[k];
    out << "}";
  }
  out << '\n';
  for (const auto& w : core.warnings) out << "warning: " << w << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Similarity-based diagnosis of external performance problems in SPMD programs", "spmdiag"};
  app.require_subcommand(1);

  AnalyzeOptions analyze_opt;
  auto* analyze_cmd = app.add_subcommand("analyze", "Diagnose a trace file");
  analyze_cmd->add_option("trace", analyze_opt.trace_path, "Trace file (JSON or delimited)")->required();
  analyze_cmd->add_option("--config", analyze_opt.config_path, "Key-value configuration file");
  analyze_cmd->add_option("--time-semantics", analyze_opt.time_semantics, "inclusive|exclusive")
      ->check(CLI::IsMember({"inclusive", "exclusive"}));
  analyze_cmd->add_option("--min-pts", analyze_opt.min_pts, "OPTICS min_pts");
  analyze_cmd->add_option("--extraction-threshold", analyze_opt.threshold,
                          "Reachability cut: 0.25, rel:0.25 or abs:3.5");
  analyze_cmd->add_option("--output", analyze_opt.output_path, "Write the machine-readable result here");
  analyze_cmd->add_option("--format", analyze_opt.format, "text|structured")
      ->check(CLI::IsMember({"text", "structured"}));
  analyze_cmd->add_option("--reachability-plot", analyze_opt.reachability_path,
                          "Write the baseline reachability plot as CSV");

  GenerateOptions generate_opt;
  auto* generate_cmd = app.add_subcommand("generate", "Generate a synthetic trace from a spec");
  generate_cmd->add_option("spec", generate_opt.spec_path, "Synthetic trace spec (JSON)")->required();
  generate_cmd->add_option("--seed", generate_opt.seed, "Noise seed");
  generate_cmd->add_option("--output", generate_opt.output_path, "Trace output path (default: stdout)");

  std::string table_path;
  auto* roughset_cmd = app.add_subcommand("roughset", "Discernibility matrix and core of a decision table");
  roughset_cmd->add_option("table", table_path, "Decision table (delimited text)")->required();

  std::vector<std::string> argv_storage{"spmdiag"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(analyze_opt, out);
    if (*generate_cmd) return cmd_generate(generate_opt, out, err);
    if (*roughset_cmd) return cmd_roughset(table_path, out);
  } catch (const DegenerateVectorError& e) {
    err << "trace quality failure: " << e.what() << '\n';
    return kExitTraceQuality;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitUsage;
}

}  // namespace spmdiag
