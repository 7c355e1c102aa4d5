#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "spmdiag/clustering.hpp"
#include "spmdiag/ingest.hpp"

namespace spmdiag {

struct AnalysisConfig {
  /// Clustering of whole performance vectors.
  OpticsParams process_params;
  /// One-dimensional clustering of accessory metrics.
  OpticsParams attribute_params;
  /// Overrides the trace file's own flag when set.
  std::optional<TimeSemantics> time_semantics;
};

/// `key = value` lines; '#' starts a comment. Recognised keys: min_pts, eps,
/// extraction_threshold, attribute_min_pts, attribute_eps,
/// attribute_extraction_threshold, time_semantics.
AnalysisConfig read_config(std::istream& in, const std::string& source = "<config>");
AnalysisConfig load_config(const std::string& path);

}  // namespace spmdiag
