#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spmdiag/trace_model.hpp"

namespace spmdiag {

enum class TimeSemantics { inclusive, exclusive };

TimeSemantics parse_time_semantics(const std::string& text);
std::string to_string(TimeSemantics t);

inline constexpr int kTraceFormatVersion = 1;

/// Reads a trace document. JSON is detected by a leading '{'; anything else is
/// read as the delimited "rank,region,metric,value" variant.
///
/// Exclusive cpu_time is summed over each region's subtree, so the returned
/// trace always carries inclusive times. `time_semantics` overrides the flag
/// stored in the file.
TraceSet read_trace(std::istream& in, const std::string& source,
                    std::optional<TimeSemantics> time_semantics = std::nullopt);
TraceSet load_trace(const std::string& path, std::optional<TimeSemantics> time_semantics = std::nullopt);

/// Writes the JSON form with inclusive times.
void write_trace(std::ostream& out, const TraceSet& trace);
void save_trace(const std::string& path, const TraceSet& trace);

/// Sums exclusive cpu_time over subtrees. Other metrics are left alone.
TraceSet to_inclusive(const RegionTree& tree, std::vector<ProcessProfile> exclusive_profiles,
                      TraceMetadata metadata = {});

// ---------------------------------------------------------------------------
// Synthetic traces

struct ImbalanceInjection {
  RegionId region = 0;
  std::vector<double> multipliers;  // one per rank
};

struct AccessoryGenerator {
  MetricKind metric;
  double base = 0.0;
  std::vector<double> multipliers;  // one per rank
  std::vector<RegionId> regions;    // empty = every region
};

struct SynthSpec {
  std::string label;
  int process_count = 2;
  std::vector<RegionNode> regions;
  /// Own (exclusive) CPU seconds of each region before injections.
  std::map<RegionId, double> base_cpu_time;
  std::vector<ImbalanceInjection> imbalance;
  std::vector<AccessoryGenerator> accessories;
  double noise_amplitude = 0.0;

  /// Throws ValidationError.
  void validate() const;
};

SynthSpec read_synth_spec(std::istream& in, const std::string& source = "<spec>");
SynthSpec load_synth_spec(const std::string& path);

/// Own time of (rank, region) is base x product of injected multipliers x
/// (1 + u), u uniform in [-amplitude, amplitude]; the returned trace holds the
/// inclusive sums. Accessory samples follow the same noise model.
/// Deterministic for a fixed seed.
TraceSet generate_trace(const SynthSpec& spec, std::uint64_t seed);

}  // namespace spmdiag
