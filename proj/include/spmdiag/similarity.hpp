#pragma once

#include <span>
#include <utility>

#include "spmdiag/trace_model.hpp"

namespace spmdiag {

struct SeverityReport {
  double severity = 0.0;
  std::pair<Rank, Rank> max_pair{0, 0};
  Rank min_len_rank = 0;
  double max_distance = 0.0;
  double min_length = 0.0;
};

/// Euclidean distance over masked readings. Vectors must share region order.
double distance(const PerformanceVector& a, const PerformanceVector& b);

/// Euclidean norm of the masked readings.
double length(const PerformanceVector& v);

/// Dissimilarity severity: the largest pairwise distance divided by the
/// shortest vector length.
///
/// The pair scan is exhaustive, O(p^2 * n) for p vectors of dimension n.
/// Throws ValidationError for fewer than two vectors and DegenerateVectorError
/// when any vector has zero length.
SeverityReport severity(std::span<const PerformanceVector> vectors);

}  // namespace spmdiag
