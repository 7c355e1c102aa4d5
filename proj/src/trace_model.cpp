#include "spmdiag/trace_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "spmdiag/errors.hpp"

namespace spmdiag {

// ---------------------------------------------------------------------------
// RegionTree

RegionTree::RegionTree(std::vector<RegionNode> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.id < 1) {
      throw ValidationError("region id " + std::to_string(n.id) + " must be >= 1");
    }
    if (!index_.emplace(n.id, i).second) {
      throw ValidationError("duplicate region id " + std::to_string(n.id));
    }
  }
  for (const auto& n : nodes_) {
    if (!n.parent) {
      roots_.push_back(n.id);
      continue;
    }
    if (*n.parent == n.id) {
      throw ValidationError("region " + std::to_string(n.id) + " is its own parent");
    }
    if (!index_.count(*n.parent)) {
      throw ValidationError("region " + std::to_string(n.id) + " references unknown parent " +
                            std::to_string(*n.parent));
    }
    children_[*n.parent].push_back(n.id);
  }

  // Pre-order walk from the roots; anything not reached sits on a cycle.
  std::unordered_map<RegionId, int> depth;
  std::function<void(RegionId, int)> walk = [&](RegionId id, int d) {
    depth[id] = d;
    preorder_.push_back(id);
    if (auto it = children_.find(id); it != children_.end()) {
      for (RegionId c : it->second) walk(c, d + 1);
    }
  };
  for (RegionId r : roots_) walk(r, 1);
  if (preorder_.size() != nodes_.size()) {
    for (const auto& n : nodes_) {
      if (!depth.count(n.id)) {
        throw ValidationError("region " + std::to_string(n.id) + " lies on a parent cycle");
      }
    }
  }

  for (auto& n : nodes_) {
    const int d = depth.at(n.id);
    if (n.depth != 0 && n.depth != d) {
      throw ValidationError("region " + std::to_string(n.id) + " declares depth " + std::to_string(n.depth) +
                            " but its parent chain gives " + std::to_string(d));
    }
    n.depth = d;
  }
}

const RegionNode& RegionTree::node(RegionId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("unknown region " + std::to_string(id));
  return nodes_[it->second];
}

const std::vector<RegionId>& RegionTree::children(RegionId id) const {
  static const std::vector<RegionId> none;
  node(id);
  auto it = children_.find(id);
  return it == children_.end() ? none : it->second;
}

std::vector<RegionId> RegionTree::ancestors(RegionId id) const {
  std::vector<RegionId> out;
  for (auto p = node(id).parent; p; p = node(*p).parent) out.push_back(*p);
  return out;
}

std::vector<RegionId> RegionTree::subtree(RegionId id) const {
  std::vector<RegionId> out{id};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& ch = children(out[i]);
    out.insert(out.end(), ch.begin(), ch.end());
  }
  // Re-sort into pre-order so callers see the global dimension order.
  std::vector<RegionId> ordered;
  std::set<RegionId> members(out.begin(), out.end());
  for (RegionId r : preorder_) {
    if (members.count(r)) ordered.push_back(r);
  }
  return ordered;
}

// ---------------------------------------------------------------------------
// MetricKind

const std::vector<std::string>& MetricKind::builtin_names() {
  static const std::vector<std::string> names{"cpu_time",         "l1_miss_rate",        "l2_miss_rate",
                                              "disk_io_quantity", "network_io_quantity", "instruction_count"};
  return names;
}

MetricKind::MetricKind(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw ValidationError("metric name must not be empty");
  const auto& b = builtin_names();
  auto it = std::find(b.begin(), b.end(), name_);
  builtin_rank_ = it == b.end() ? -1 : static_cast<int>(it - b.begin());
}

std::strong_ordering operator<=>(const MetricKind& a, const MetricKind& b) {
  const bool ab = a.is_builtin();
  const bool bb = b.is_builtin();
  if (ab && bb) return a.builtin_rank_ <=> b.builtin_rank_;
  if (ab != bb) return ab ? std::strong_ordering::less : std::strong_ordering::greater;
  return a.name_.compare(b.name_) <=> 0;
}

// ---------------------------------------------------------------------------
// ProcessProfile / TraceSet

std::optional<double> ProcessProfile::sample(RegionId region, const MetricKind& metric) const {
  auto it = samples.find(SampleKey{region, metric});
  if (it == samples.end()) return std::nullopt;
  return it->second;
}

double ProcessProfile::cpu_time(RegionId region) const {
  auto v = sample(region, MetricKind::cpu_time());
  if (!v) {
    throw ValidationError("rank " + std::to_string(rank) + " has no cpu_time sample for region " +
                          std::to_string(region));
  }
  return *v;
}

TraceSet::TraceSet(RegionTree tree, std::vector<ProcessProfile> profiles, TraceMetadata metadata)
    : tree_(std::move(tree)), profiles_(std::move(profiles)), metadata_(std::move(metadata)) {
  if (profiles_.empty()) throw ValidationError("trace contains no process profiles");
  std::sort(profiles_.begin(), profiles_.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
  for (std::size_t i = 0; i < profiles_.size(); ++i) {
    const Rank r = profiles_[i].rank;
    if (i > 0 && profiles_[i - 1].rank == r) throw ValidationError("duplicate rank " + std::to_string(r));
    if (r != static_cast<Rank>(i)) {
      throw ValidationError("ranks must be contiguous from 0; rank " + std::to_string(i) + " is missing");
    }
  }
  for (const auto& p : profiles_) {
    for (const auto& [key, value] : p.samples) {
      if (!tree_.contains(key.region)) {
        throw ValidationError("rank " + std::to_string(p.rank) + " has samples for unknown region " +
                              std::to_string(key.region));
      }
      if (!std::isfinite(value) || value < 0.0) {
        throw ValidationError("rank " + std::to_string(p.rank) + " region " + std::to_string(key.region) +
                              " metric " + key.metric.name() + " has invalid value " + std::to_string(value));
      }
    }
    for (RegionId r : tree_.preorder()) {
      if (!p.sample(r, MetricKind::cpu_time())) {
        throw ValidationError("rank " + std::to_string(p.rank) + " is missing cpu_time for region " +
                              std::to_string(r));
      }
    }
  }
}

const ProcessProfile& TraceSet::profile(Rank rank) const {
  if (rank < 0 || static_cast<std::size_t>(rank) >= profiles_.size()) {
    throw ValidationError("unknown rank " + std::to_string(rank));
  }
  return profiles_[static_cast<std::size_t>(rank)];
}

std::vector<MetricKind> TraceSet::metric_kinds() const {
  std::set<MetricKind> kinds;
  for (const auto& p : profiles_) {
    for (const auto& entry : p.samples) kinds.insert(entry.first.metric);
  }
  return {kinds.begin(), kinds.end()};
}

// ---------------------------------------------------------------------------
// PerformanceVector

PerformanceVector::PerformanceVector(Rank rank, std::vector<RegionId> regions, std::vector<double> values)
    : rank_(rank), regions_(std::move(regions)), values_(std::move(values)), masked_(values_.size(), false) {
  if (regions_.size() != values_.size()) {
    throw ValidationError("vector for rank " + std::to_string(rank) + " has " + std::to_string(regions_.size()) +
                          " regions but " + std::to_string(values_.size()) + " values");
  }
}

std::optional<std::size_t> PerformanceVector::position(RegionId region) const {
  auto it = std::find(regions_.begin(), regions_.end(), region);
  if (it == regions_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - regions_.begin());
}

double PerformanceVector::reading(std::size_t i) const { return masked_[i] ? 0.0 : values_[i]; }

std::vector<double> PerformanceVector::readings() const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = reading(i);
  return out;
}

PerformanceVector PerformanceVector::with_mask(const std::set<RegionId>& regions) const {
  PerformanceVector out = *this;
  for (RegionId r : regions) {
    auto pos = position(r);
    if (!pos) throw ValidationError("cannot mask unknown region " + std::to_string(r));
    out.mask_.insert(r);
    out.masked_[*pos] = true;
  }
  return out;
}

PerformanceVector PerformanceVector::without_mask(const std::set<RegionId>& regions) const {
  PerformanceVector out = *this;
  for (RegionId r : regions) {
    auto pos = position(r);
    if (!pos) throw ValidationError("cannot unmask unknown region " + std::to_string(r));
    out.mask_.erase(r);
    out.masked_[*pos] = false;
  }
  return out;
}

std::vector<PerformanceVector> build_vectors(const TraceSet& trace) {
  const auto& order = trace.tree().preorder();
  std::vector<PerformanceVector> out;
  out.reserve(trace.process_count());
  for (const auto& p : trace.profiles()) {
    std::vector<double> values;
    values.reserve(order.size());
    for (RegionId r : order) values.push_back(p.cpu_time(r));
    out.emplace_back(p.rank, order, std::move(values));
  }
  return out;
}

PerformanceVector mask_vector(const PerformanceVector& v, const std::set<RegionId>& regions) {
  return v.with_mask(regions);
}

std::vector<PerformanceVector> mask_all(std::span<const PerformanceVector> vectors,
                                        const std::set<RegionId>& regions) {
  std::vector<PerformanceVector> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) out.push_back(v.with_mask(regions));
  return out;
}

}  // namespace spmdiag
