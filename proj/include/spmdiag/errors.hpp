#pragma once

#include <stdexcept>
#include <string>

namespace spmdiag {

/// Input violates a structural invariant (unknown region, duplicate rank, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. The message carries line/field context.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A performance vector has zero length, so the severity ratio is undefined.
class DegenerateVectorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spmdiag
