#pragma once

#include <stdexcept>

namespace hcl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad arguments or malformed input data.
struct InvalidInput : Error {
  using Error::Error;
};

// A value object violated its invariants mid-computation.
struct InvalidState : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// The optimal-power search found no jump transition to anchor on.
struct SelectionFailed : Error {
  using Error::Error;
};

// Metric undefined on the given inputs (e.g. empty restriction set).
struct UndefinedMetric : Error {
  using Error::Error;
};

}  // namespace hcl
