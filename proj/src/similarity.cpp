#include "spmdiag/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "spmdiag/errors.hpp"

namespace spmdiag {

double distance(const PerformanceVector& a, const PerformanceVector& b) {
  if (a.dimension() != b.dimension() || a.regions() != b.regions()) {
    throw ValidationError("cannot compare vectors of ranks " + std::to_string(a.rank()) + " and " +
                          std::to_string(b.rank()) + ": region orderings differ");
  }
  long double sum = 0.0L;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    const long double d = static_cast<long double>(a.reading(i)) - b.reading(i);
    sum += d * d;
  }
  return static_cast<double>(std::sqrt(sum));
}

double length(const PerformanceVector& v) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < v.dimension(); ++i) {
    const long double x = v.reading(i);
    sum += x * x;
  }
  return static_cast<double>(std::sqrt(sum));
}

SeverityReport severity(std::span<const PerformanceVector> vectors) {
  if (vectors.size() < 2) throw ValidationError("severity needs at least two vectors");

  SeverityReport report;
  bool first = true;
  for (const auto& v : vectors) {
    const double len = length(v);
    if (len == 0.0) {
      throw DegenerateVectorError("rank " + std::to_string(v.rank()) +
                                  " has zero CPU time in every active region; severity is undefined");
    }
    // Ties resolve to the lower rank so results do not depend on input order.
    if (first || len < report.min_length || (len == report.min_length && v.rank() < report.min_len_rank)) {
      report.min_length = len;
      report.min_len_rank = v.rank();
      first = false;
    }
  }

  bool have_pair = false;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      const double d = distance(vectors[i], vectors[j]);
      const Rank ra = vectors[i].rank();
      const Rank rb = vectors[j].rank();
      const std::pair<Rank, Rank> pair{std::min(ra, rb), std::max(ra, rb)};
      if (!have_pair || d > report.max_distance || (d == report.max_distance && pair < report.max_pair)) {
        report.max_distance = d;
        report.max_pair = pair;
        have_pair = true;
      }
    }
  }
  report.severity = report.max_distance / report.min_length;
  return report;
}

}  // namespace spmdiag
