#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace varcurve {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke an operation precondition (mismatched base points, wrong sizes).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration: bad manifold id, off-grid knot, oversized boundary velocity.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// log/transport asked for a point pair on (or within tolerance of) the cut locus.
class CutLocusError : public Error {
 public:
  using Error::Error;
};

/// Consecutive curve samples are too far apart for finite differences to mean anything.
class DegenerateCurveError : public Error {
 public:
  DegenerateCurveError(std::size_t index, const std::string& what)
      : Error(what + " (sample " + std::to_string(index) + ")"), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace varcurve
