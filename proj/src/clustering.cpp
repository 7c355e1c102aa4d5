#include "spmdiag/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>

#include "spmdiag/errors.hpp"

namespace spmdiag {

// ---------------------------------------------------------------------------
// Parameters

ExtractionThreshold ExtractionThreshold::parse(const std::string& text) {
  ExtractionThreshold t;
  std::string number = text;
  if (text.rfind("rel:", 0) == 0) {
    number = text.substr(4);
  } else if (text.rfind("abs:", 0) == 0) {
    t.mode = Mode::absolute;
    number = text.substr(4);
  }
  try {
    std::size_t used = 0;
    t.value = std::stod(number, &used);
    if (used != number.size()) throw std::invalid_argument(number);
  } catch (const std::exception&) {
    throw ValidationError("invalid extraction threshold '" + text + "' (expected e.g. 0.25, rel:0.25, abs:3.5)");
  }
  if (!(t.value > 0.0) || !std::isfinite(t.value)) {
    throw ValidationError("extraction threshold must be positive, got '" + text + "'");
  }
  return t;
}

std::string ExtractionThreshold::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << (mode == Mode::relative ? "rel:" : "abs:") << value;
  return os.str();
}

void OpticsParams::validate() const {
  if (min_pts < 2) throw ValidationError("min_pts must be >= 2, got " + std::to_string(min_pts));
  if (eps && !(*eps > 0.0)) throw ValidationError("eps must be positive");
  if (!(threshold.value > 0.0) || !std::isfinite(threshold.value)) {
    throw ValidationError("extraction threshold must be positive");
  }
}

double ReachabilityResult::max_finite_reachability() const {
  double m = 0.0;
  for (double r : reachability) {
    if (std::isfinite(r)) m = std::max(m, r);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<std::vector<Rank>> classes, std::set<Rank> noise)
    : classes_(std::move(classes)), noise_(std::move(noise)) {
  for (auto& c : classes_) {
    if (c.empty()) throw ValidationError("partition class is empty");
    std::sort(c.begin(), c.end());
  }
  std::sort(classes_.begin(), classes_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t k = 0; k < classes_.size(); ++k) {
    for (Rank r : classes_[k]) {
      if (!class_of_.emplace(r, static_cast<int>(k)).second) {
        throw ValidationError("rank " + std::to_string(r) + " appears in more than one class");
      }
    }
  }
  for (Rank r : noise_) {
    if (!class_of_.count(r)) throw ValidationError("noise rank " + std::to_string(r) + " is not classified");
  }
}

int Partition::class_of(Rank rank) const {
  auto it = class_of_.find(rank);
  if (it == class_of_.end()) throw ValidationError("rank " + std::to_string(rank) + " is not in the partition");
  return it->second;
}

std::vector<int> Partition::labels() const {
  std::vector<int> out;
  out.reserve(class_of_.size());
  for (const auto& [rank, k] : class_of_) out.push_back(k);
  return out;
}

// ---------------------------------------------------------------------------
// OPTICS

namespace {

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double d = static_cast<long double>(a[i]) - b[i];
    sum += d * d;
  }
  return static_cast<double>(std::sqrt(sum));
}

}  // namespace

ReachabilityResult optics_order(std::span<const std::vector<double>> points, const OpticsParams& params,
                                std::span<const Rank> ids) {
  params.validate();
  const std::size_t n = points.size();
  if (n == 0) throw ValidationError("OPTICS needs at least one point");
  for (const auto& p : points) {
    if (p.size() != points[0].size()) throw ValidationError("OPTICS points have differing dimensions");
  }
  if (!ids.empty() && ids.size() != n) throw ValidationError("OPTICS id list does not match point count");

  ReachabilityResult result;
  result.ids.resize(n);
  if (ids.empty()) {
    std::iota(result.ids.begin(), result.ids.end(), 0);
  } else {
    std::copy(ids.begin(), ids.end(), result.ids.begin());
  }

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[i * n + j] = dist[j * n + i] = euclidean(points[i], points[j]);
    }
  }
  const double eps = params.eps.value_or(kUndefinedReachability);
  const auto min_pts = static_cast<std::size_t>(params.min_pts);

  result.core_distance.assign(n, kUndefinedReachability);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> near;
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i * n + j] <= eps) near.push_back(dist[i * n + j]);
    }
    if (near.size() >= min_pts) {
      std::nth_element(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(min_pts - 1), near.end());
      result.core_distance[i] = near[min_pts - 1];
    }
  }

  std::vector<std::size_t> by_rank(n);
  std::iota(by_rank.begin(), by_rank.end(), 0);
  std::sort(by_rank.begin(), by_rank.end(),
            [&](std::size_t a, std::size_t b) { return result.ids[a] < result.ids[b]; });

  std::vector<double> reach(n, kUndefinedReachability);
  std::vector<bool> processed(n, false);
  std::set<std::tuple<double, Rank, std::size_t>> seeds;

  auto update = [&](std::size_t p) {
    const double core = result.core_distance[p];
    if (!std::isfinite(core)) return;
    for (std::size_t o = 0; o < n; ++o) {
      if (processed[o] || dist[p * n + o] > eps) continue;
      const double candidate = std::max(core, dist[p * n + o]);
      if (candidate < reach[o]) {
        if (std::isfinite(reach[o])) seeds.erase({reach[o], result.ids[o], o});
        reach[o] = candidate;
        seeds.insert({candidate, result.ids[o], o});
      }
    }
  };
  auto emit = [&](std::size_t p) {
    processed[p] = true;
    result.ordering.push_back(p);
    result.reachability.push_back(reach[p]);
    update(p);
  };

  for (std::size_t start : by_rank) {
    if (processed[start]) continue;
    emit(start);
    while (!seeds.empty()) {
      auto [r, id, next] = *seeds.begin();
      seeds.erase(seeds.begin());
      emit(next);
    }
  }
  return result;
}

double resolve_threshold(const ReachabilityResult& r, const ExtractionThreshold& t) {
  if (t.mode == ExtractionThreshold::Mode::absolute) return t.value;
  return t.value * r.max_finite_reachability();
}

std::vector<std::size_t> cut_positions(const ReachabilityResult& r, double threshold) {
  std::vector<std::size_t> cuts;
  for (std::size_t pos = 1; pos < r.reachability.size(); ++pos) {
    if (!(r.reachability[pos] <= threshold)) cuts.push_back(pos);
  }
  return cuts;
}

Partition extract_partition(const ReachabilityResult& r, const OpticsParams& params) {
  const double threshold = resolve_threshold(r, params.threshold);
  std::vector<std::vector<Rank>> classes;
  for (std::size_t pos = 0; pos < r.ordering.size(); ++pos) {
    const Rank rank = r.ids[r.ordering[pos]];
    if (pos == 0 || !(r.reachability[pos] <= threshold)) {
      classes.push_back({rank});
    } else {
      classes.back().push_back(rank);
    }
  }
  std::set<Rank> noise;
  for (const auto& c : classes) {
    if (c.size() == 1) noise.insert(c.front());
  }
  return Partition(std::move(classes), std::move(noise));
}

Partition cluster(std::span<const std::vector<double>> points, const OpticsParams& params,
                  std::span<const Rank> ids) {
  return extract_partition(optics_order(points, params, ids), params);
}

Partition cluster(std::span<const PerformanceVector> vectors, const OpticsParams& params) {
  std::vector<const PerformanceVector*> sorted;
  for (const auto& v : vectors) sorted.push_back(&v);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->rank() < b->rank(); });
  std::vector<std::vector<double>> points;
  std::vector<Rank> ids;
  for (const auto* v : sorted) {
    if (v->regions() != sorted.front()->regions()) {
      throw ValidationError("vectors passed to cluster() use different region orderings");
    }
    points.push_back(v->readings());
    ids.push_back(v->rank());
  }
  return cluster(points, params, ids);
}

Partition cluster_values(std::span<const double> values, const OpticsParams& params) {
  std::vector<std::vector<double>> points;
  points.reserve(values.size());
  for (double v : values) points.push_back({v});
  return cluster(points, params);
}

void write_reachability_plot(std::ostream& out, const ReachabilityResult& r) {
  out << "position,rank,reachability\n";
  const auto old_precision = out.precision(17);
  for (std::size_t pos = 0; pos < r.ordering.size(); ++pos) {
    out << pos << ',' << r.ids[r.ordering[pos]] << ',';
    if (std::isfinite(r.reachability[pos])) {
      out << r.reachability[pos];
    } else {
      out << "inf";
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace spmdiag
