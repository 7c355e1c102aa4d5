#pragma once

#include <span>
#include <string>
#include <vector>

#include "spmdiag/clustering.hpp"
#include "spmdiag/roughset.hpp"
#include "spmdiag/trace_model.hpp"

namespace spmdiag {

/// One accessory metric measured inside one core region.
struct AttributeSpec {
  MetricKind metric;
  RegionId region = 0;
  OpticsParams params;
};

/// Column name for `spec`: the bare metric name when only one core region is
/// analysed, "metric@region" otherwise.
std::string attribute_name(const AttributeSpec& spec, bool qualify);

/// Rows are ranks. Each attribute value is the class label of the rank when
/// that metric's values are clustered in one dimension; the decision is the
/// rank's class in `process_partition`.
///
/// Throws ValidationError when a rank lacks a metric, a spec names a region
/// outside `cccr_regions`, or the partition does not cover every rank.
DecisionTable build_decision_table(const TraceSet& trace, std::span<const RegionId> cccr_regions,
                                   const Partition& process_partition, std::span<const AttributeSpec> specs);

/// Every non-cpu metric sampled by all ranks in each region, in MetricKind order.
/// Metrics sampled by only some ranks are reported through `skipped`.
std::vector<AttributeSpec> default_attribute_specs(const TraceSet& trace, std::span<const RegionId> cccr_regions,
                                                   const OpticsParams& params,
                                                   std::vector<std::string>* skipped = nullptr);

}  // namespace spmdiag
