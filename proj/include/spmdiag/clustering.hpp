#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "spmdiag/trace_model.hpp"

namespace spmdiag {

inline constexpr double kUndefinedReachability = std::numeric_limits<double>::infinity();

/// Where to cut the reachability plot.
struct ExtractionThreshold {
  enum class Mode { relative, absolute };
  Mode mode = Mode::relative;
  // relative: fraction of the largest finite reachability in the plot.
  double value = 0.25;

  static ExtractionThreshold relative(double fraction) { return {Mode::relative, fraction}; }
  static ExtractionThreshold absolute(double cut) { return {Mode::absolute, cut}; }
  /// Accepts "0.25", "rel:0.25" or "abs:3.5".
  static ExtractionThreshold parse(const std::string& text);
  std::string to_string() const;

  friend bool operator==(const ExtractionThreshold&, const ExtractionThreshold&) = default;
};

struct OpticsParams {
  int min_pts = 2;
  std::optional<double> eps;  // nullopt = unbounded
  ExtractionThreshold threshold;

  /// Throws ValidationError when min_pts < 2 or a threshold/radius is not positive.
  void validate() const;

  friend bool operator==(const OpticsParams&, const OpticsParams&) = default;
};

struct ReachabilityResult {
  std::vector<std::size_t> ordering;   // point indices in processing order
  std::vector<double> reachability;    // per position; position 0 is undefined
  std::vector<double> core_distance;   // per point index
  std::vector<Rank> ids;               // rank of each point index

  double max_finite_reachability() const;
};

/// Disjoint classes of ranks. Classes are numbered by ascending minimum rank.
class Partition {
 public:
  Partition() = default;
  /// Canonicalizes; throws ValidationError if classes overlap or are empty.
  explicit Partition(std::vector<std::vector<Rank>> classes, std::set<Rank> noise = {});

  const std::vector<std::vector<Rank>>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  /// Ranks that were not density-reachable and became singleton classes.
  const std::set<Rank>& noise() const { return noise_; }
  int class_of(Rank rank) const;
  /// Class index for each rank in ascending rank order.
  std::vector<int> labels() const;

  // Set-of-sets equality; the noise flags do not participate.
  friend bool operator==(const Partition& a, const Partition& b) { return a.classes_ == b.classes_; }

 private:
  std::vector<std::vector<Rank>> classes_;
  std::set<Rank> noise_;
  std::map<Rank, int> class_of_;
};

/// OPTICS ordering. The neighbourhood of a point includes the point itself,
/// so with min_pts = 2 the core distance is the nearest-neighbour distance.
/// Seed ties pop the lower rank first. `ids` defaults to 0..n-1.
ReachabilityResult optics_order(std::span<const std::vector<double>> points, const OpticsParams& params,
                                std::span<const Rank> ids = {});

/// Cut the plot: a position whose reachability exceeds the threshold opens a
/// new class; following positions at or below it join that class.
Partition extract_partition(const ReachabilityResult& r, const OpticsParams& params);

/// Threshold in distance units for this plot.
double resolve_threshold(const ReachabilityResult& r, const ExtractionThreshold& t);

/// Positions (1-based into the ordering) at which a new class opens.
std::vector<std::size_t> cut_positions(const ReachabilityResult& r, double threshold);

Partition cluster(std::span<const std::vector<double>> points, const OpticsParams& params,
                  std::span<const Rank> ids = {});

/// Clusters masked readings; vectors may arrive in any order.
Partition cluster(std::span<const PerformanceVector> vectors, const OpticsParams& params);

/// Clusters scalar values (one per rank, in rank order).
Partition cluster_values(std::span<const double> values, const OpticsParams& params);

/// "position,rank,reachability" rows with a header; undefined prints as inf.
void write_reachability_plot(std::ostream& out, const ReachabilityResult& r);

}  // namespace spmdiag
