#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spmdiag/ingest.hpp"
#include "spmdiag/trace_model.hpp"

namespace spmdiag::testing {

inline std::string fixture(const std::string& name) { return std::string(SPMDIAG_FIXTURE_DIR) + "/" + name; }

/// Flat top-level regions 1..n.
inline RegionTree flat_tree(int n) {
  std::vector<RegionNode> nodes;
  for (int i = 1; i <= n; ++i) nodes.push_back(RegionNode{i, "r" + std::to_string(i), std::nullopt, 0});
  return RegionTree(nodes);
}

/// cpu[rank][i] is the inclusive time of the i-th region in tree declaration order.
inline TraceSet make_trace(const RegionTree& tree, const std::vector<std::vector<double>>& cpu) {
  std::vector<ProcessProfile> profiles;
  for (std::size_t rank = 0; rank < cpu.size(); ++rank) {
    ProcessProfile p;
    p.rank = static_cast<Rank>(rank);
    for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
      p.samples[SampleKey{tree.nodes()[i].id, MetricKind::cpu_time()}] = cpu[rank][i];
    }
    profiles.push_back(std::move(p));
  }
  return TraceSet(tree, std::move(profiles));
}

inline TraceSet geost_trace() { return generate_trace(load_synth_spec(fixture("geost_spec.json")), 7); }
inline TraceSet balanced_trace() { return generate_trace(load_synth_spec(fixture("balanced_spec.json")), 7); }

/// Random forest of up to `max_regions` regions with small integer exclusive
/// times, returned in inclusive form.
inline TraceSet random_trace(std::mt19937_64& rng, int max_regions, int max_procs) {
  std::uniform_int_distribution<int> nreg(1, max_regions);
  std::uniform_int_distribution<int> nproc(2, max_procs);
  const int regions = nreg(rng);
  const int procs = nproc(rng);
  std::vector<RegionNode> nodes;
  for (int id = 1; id <= regions; ++id) {
    RegionNode n{id, "", std::nullopt, 0};
    // Parents always precede children, so no cycles.
    if (id > 1 && std::uniform_int_distribution<int>(0, 2)(rng) != 0) {
      n.parent = std::uniform_int_distribution<int>(0, id - 1)(rng);
      if (*n.parent == 0) n.parent.reset();
    }
    nodes.push_back(n);
  }
  RegionTree tree(nodes);
  const std::vector<double> levels{0.0, 1.0, 2.0, 5.0};
  std::uniform_int_distribution<std::size_t> pick(0, levels.size() - 1);
  std::vector<ProcessProfile> profiles;
  for (int r = 0; r < procs; ++r) {
    ProcessProfile p;
    p.rank = r;
    for (int id = 1; id <= regions; ++id) p.samples[SampleKey{id, MetricKind::cpu_time()}] = levels[pick(rng)];
    profiles.push_back(std::move(p));
  }
  return to_inclusive(tree, std::move(profiles));
}

}  // namespace spmdiag::testing
