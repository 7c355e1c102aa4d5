#include "spmdiag/decision_builder.hpp"

#include <algorithm>

#include "spmdiag/errors.hpp"

namespace spmdiag {

std::string attribute_name(const AttributeSpec& spec, bool qualify) {
  if (!qualify) return spec.metric.name();
  return spec.metric.name() + "@" + std::to_string(spec.region);
}

DecisionTable build_decision_table(const TraceSet& trace, std::span<const RegionId> cccr_regions,
                                   const Partition& process_partition, std::span<const AttributeSpec> specs) {
  const auto& profiles = trace.profiles();
  for (const auto& p : profiles) process_partition.class_of(p.rank);
  if (process_partition.labels().size() != profiles.size()) {
    throw ValidationError("process partition does not match the trace's ranks");
  }

  std::vector<std::string> names;
  std::vector<std::vector<int>> columns;
  for (const auto& spec : specs) {
    if (std::find(cccr_regions.begin(), cccr_regions.end(), spec.region) == cccr_regions.end()) {
      throw ValidationError("attribute " + spec.metric.name() + " refers to region " + std::to_string(spec.region) +
                            ", which is not a core critical region");
    }
    std::vector<double> values;
    for (const auto& p : profiles) {
      auto v = p.sample(spec.region, spec.metric);
      if (!v) {
        throw ValidationError("rank " + std::to_string(p.rank) + " has no " + spec.metric.name() +
                              " sample in region " + std::to_string(spec.region));
      }
      values.push_back(*v);
    }
    const Partition classes = cluster_values(values, spec.params);
    columns.push_back(classes.labels());
    names.push_back(attribute_name(spec, cccr_regions.size() > 1));
  }

  std::vector<DecisionEntry> entries;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    DecisionEntry e;
    e.id = std::to_string(profiles[i].rank);
    for (const auto& col : columns) e.values.push_back(std::to_string(col[i]));
    e.decision = std::to_string(process_partition.class_of(profiles[i].rank));
    entries.push_back(std::move(e));
  }
  return DecisionTable(std::move(names), std::move(entries));
}

std::vector<AttributeSpec> default_attribute_specs(const TraceSet& trace, std::span<const RegionId> cccr_regions,
                                                   const OpticsParams& params, std::vector<std::string>* skipped) {
  std::vector<AttributeSpec> specs;
  for (RegionId region : cccr_regions) {
    for (const auto& metric : trace.metric_kinds()) {
      if (metric.is_cpu_time()) continue;
      std::size_t have = 0;
      for (const auto& p : trace.profiles()) {
        if (p.sample(region, metric)) ++have;
      }
      if (have == trace.process_count()) {
        specs.push_back(AttributeSpec{metric, region, params});
      } else if (have > 0 && skipped) {
        skipped->push_back(metric.name() + " in region " + std::to_string(region) + " is sampled by only " +
                           std::to_string(have) + " of " + std::to_string(trace.process_count()) + " ranks");
      }
    }
  }
  return specs;
}

}  // namespace spmdiag
