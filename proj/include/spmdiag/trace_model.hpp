#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace spmdiag {

using RegionId = int;
using Rank = int;

// ---------------------------------------------------------------------------
// Region hierarchy
// ---------------------------------------------------------------------------

struct RegionNode {
  RegionId id = 0;
  std::string label;
  std::optional<RegionId> parent;
  // 0 on input means "derive from the parent chain".
  int depth = 0;

  friend bool operator==(const RegionNode&, const RegionNode&) = default;
};

/// Nested code regions of one program. Siblings keep declaration order.
class RegionTree {
 public:
  RegionTree() = default;
  /// Validates ids, parent links and depths; throws ValidationError.
  explicit RegionTree(std::vector<RegionNode> nodes);

  const std::vector<RegionNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(RegionId id) const { return index_.count(id) != 0; }
  const RegionNode& node(RegionId id) const;
  int depth(RegionId id) const { return node(id).depth; }
  std::optional<RegionId> parent(RegionId id) const { return node(id).parent; }

  const std::vector<RegionId>& children(RegionId id) const;
  const std::vector<RegionId>& roots() const { return roots_; }
  /// Depth-first pre-order; the global dimension order of every vector.
  const std::vector<RegionId>& preorder() const { return preorder_; }
  /// Strict ancestors of `id`, nearest first.
  std::vector<RegionId> ancestors(RegionId id) const;
  /// `id` followed by all of its descendants, pre-order.
  std::vector<RegionId> subtree(RegionId id) const;

  friend bool operator==(const RegionTree& a, const RegionTree& b) { return a.nodes_ == b.nodes_; }

 private:
  std::vector<RegionNode> nodes_;
  std::unordered_map<RegionId, std::size_t> index_;
  std::unordered_map<RegionId, std::vector<RegionId>> children_;
  std::vector<RegionId> roots_;
  std::vector<RegionId> preorder_;
};

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Name of a measured quantity. The built-in kinds sort first, in declaration
/// order; custom names follow alphabetically.
class MetricKind {
 public:
  MetricKind() = default;
  explicit MetricKind(std::string name);

  static MetricKind cpu_time() { return MetricKind("cpu_time"); }
  static MetricKind l1_miss_rate() { return MetricKind("l1_miss_rate"); }
  static MetricKind l2_miss_rate() { return MetricKind("l2_miss_rate"); }
  static MetricKind disk_io_quantity() { return MetricKind("disk_io_quantity"); }
  static MetricKind network_io_quantity() { return MetricKind("network_io_quantity"); }
  static MetricKind instruction_count() { return MetricKind("instruction_count"); }

  static const std::vector<std::string>& builtin_names();

  const std::string& name() const { return name_; }
  bool is_builtin() const { return builtin_rank_ >= 0; }
  bool is_cpu_time() const { return builtin_rank_ == 0; }

  friend bool operator==(const MetricKind& a, const MetricKind& b) { return a.name_ == b.name_; }
  friend std::strong_ordering operator<=>(const MetricKind& a, const MetricKind& b);

 private:
  std::string name_;
  int builtin_rank_ = -1;
};

struct SampleKey {
  RegionId region = 0;
  MetricKind metric;

  friend bool operator==(const SampleKey&, const SampleKey&) = default;
  friend auto operator<=>(const SampleKey&, const SampleKey&) = default;
};

struct ProcessProfile {
  Rank rank = 0;
  std::map<SampleKey, double> samples;

  std::optional<double> sample(RegionId region, const MetricKind& metric) const;
  double cpu_time(RegionId region) const;

  friend bool operator==(const ProcessProfile&, const ProcessProfile&) = default;
};

struct TraceMetadata {
  std::string label;
  std::string timestamp;

  friend bool operator==(const TraceMetadata&, const TraceMetadata&) = default;
};

/// One program run: region tree plus one profile per rank, sorted by rank.
class TraceSet {
 public:
  TraceSet() = default;
  /// Validates and sorts profiles; throws ValidationError.
  TraceSet(RegionTree tree, std::vector<ProcessProfile> profiles, TraceMetadata metadata = {});

  const RegionTree& tree() const { return tree_; }
  const std::vector<ProcessProfile>& profiles() const { return profiles_; }
  const TraceMetadata& metadata() const { return metadata_; }
  std::size_t process_count() const { return profiles_.size(); }
  const ProcessProfile& profile(Rank rank) const;

  /// Metric kinds that appear anywhere in the trace, in MetricKind order.
  std::vector<MetricKind> metric_kinds() const;

  friend bool operator==(const TraceSet&, const TraceSet&) = default;

 private:
  RegionTree tree_;
  std::vector<ProcessProfile> profiles_;
  TraceMetadata metadata_;
};

// ---------------------------------------------------------------------------
// Performance vectors
// ---------------------------------------------------------------------------

/// CPU time per region for one rank, with a set of components forced to 0.
class PerformanceVector {
 public:
  PerformanceVector() = default;
  PerformanceVector(Rank rank, std::vector<RegionId> regions, std::vector<double> values);

  Rank rank() const { return rank_; }
  std::size_t dimension() const { return values_.size(); }
  const std::vector<RegionId>& regions() const { return regions_; }
  const std::set<RegionId>& mask() const { return mask_; }

  /// Component `i` as seen by distance computations (0 when masked).
  double reading(std::size_t i) const;
  std::vector<double> readings() const;
  double raw(std::size_t i) const { return values_[i]; }
  bool is_masked(RegionId region) const { return mask_.count(region) != 0; }

  PerformanceVector with_mask(const std::set<RegionId>& regions) const;
  PerformanceVector without_mask(const std::set<RegionId>& regions) const;

  friend bool operator==(const PerformanceVector&, const PerformanceVector&) = default;

 private:
  std::optional<std::size_t> position(RegionId region) const;

  Rank rank_ = 0;
  std::vector<RegionId> regions_;
  std::vector<double> values_;
  std::set<RegionId> mask_;
  std::vector<bool> masked_;
};

/// One vector per rank over the tree's pre-order; no masks applied.
std::vector<PerformanceVector> build_vectors(const TraceSet& trace);

/// Copy of `v` with `regions` added to its mask. Unknown ids throw.
PerformanceVector mask_vector(const PerformanceVector& v, const std::set<RegionId>& regions);

/// Apply `mask_vector` to every vector.
std::vector<PerformanceVector> mask_all(std::span<const PerformanceVector> vectors,
                                        const std::set<RegionId>& regions);

}  // namespace spmdiag
