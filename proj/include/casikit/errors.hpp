#pragma once

#include <stdexcept>
#include <string>

namespace casikit {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument values (nonpositive distances, bad exponents, ...).
struct DomainError : Error {
  using Error::Error;
};

/// A model was asked for an evaluation it does not define.
struct UnsupportedModelError : Error {
  using Error::Error;
};

/// Too few samples to construct a model or run a fit.
struct InsufficientDataError : Error {
  using Error::Error;
};

/// Malformed input data (non-monotone grids, bad CSV/JSON, ...).
struct FormatError : Error {
  using Error::Error;
};

/// Argument outside the domain covered by a sampled profile or table.
struct RangeError : Error {
  using Error::Error;
};

/// An iteration or quadrature failed to reach its tolerance within budget.
/// Carries the best partial value so callers can inspect how far it got.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& msg, double partial_value)
      : Error(msg), partial(partial_value) {}
  double partial;
};

/// Rank-deficient or otherwise unsolvable least-squares problem.
struct FitError : Error {
  using Error::Error;
};

/// The requested parameters are not separately determined by the data.
struct IdentifiabilityError : Error {
  using Error::Error;
};

/// Bad configuration file contents (unknown keys, missing fields, ...).
struct ConfigError : Error {
  using Error::Error;
};

/// Filesystem-level failure.
struct IoError : Error {
  using Error::Error;
};

/// Failure inside a named stage of the analysis pipeline.
struct StageError : Error {
  StageError(const std::string& stage_name, const std::string& msg)
      : Error("stage '" + stage_name + "': " + msg), stage(stage_name) {}
  std::string stage;
};

}  // namespace casikit
