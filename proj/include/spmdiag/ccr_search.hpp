#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spmdiag/clustering.hpp"
#include "spmdiag/trace_model.hpp"

namespace spmdiag {

/// A critical code region: one region, or (level 1 only) a window of
/// adjacent top-level siblings that only matters in combination.
struct CcrNode {
  std::vector<RegionId> regions;
  int level = 1;
  bool is_cccr = false;
  std::optional<std::size_t> parent;  // index into CcrTree::nodes
  /// Partition observed with this node's regions substituted or removed.
  Partition partition;

  bool combined() const { return regions.size() > 1; }
};

struct CcrTree {
  Partition baseline;
  std::vector<CcrNode> nodes;
  /// Baseline has a single class: nothing to localize.
  bool no_problem = false;
  /// Level-1 CCRs came from the sibling-combination step.
  bool combined_search = false;
  /// Regions shared by every combined group (empty if they are disjoint).
  std::vector<RegionId> combined_core;
  std::vector<std::string> warnings;

  std::vector<std::size_t> children(std::size_t node) const;
  /// Every core region set: single-region CCCR nodes plus the combined core.
  std::vector<std::vector<RegionId>> cccrs() const;
  /// Node-index paths from each level-1 node down to each leaf of the tree.
  std::vector<std::vector<std::size_t>> chains() const;
};

/// Clusters with every nested (depth > 1) region masked.
Partition baseline_partition(const TraceSet& trace, const OpticsParams& params);

/// Top-level regions whose removal changes the baseline classification.
/// Regions with zero time on every rank are skipped.
std::vector<CcrNode> find_level1_ccrs(const TraceSet& trace, const OpticsParams& params);

struct CombinedSearchResult {
  std::vector<CcrNode> groups;
  /// Intersection of the groups' region sets.
  std::vector<RegionId> core;
};

/// Masks windows of n = 2, 3, ... adjacent top-level siblings and keeps those
/// that change the baseline. Stops at the first n that yields any window.
CombinedSearchResult combine_and_search(const TraceSet& trace, const OpticsParams& params);

/// Children of a single-region CCR whose own time, substituted for the whole
/// ancestor chain, reproduces the baseline classification.
std::vector<CcrNode> descend(const TraceSet& trace, const OpticsParams& params, const CcrNode& node);

/// Full top-down search. Throws ValidationError for fewer than two processes.
CcrTree find_cccr(const TraceSet& trace, const OpticsParams& params);

}  // namespace spmdiag
