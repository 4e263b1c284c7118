#pragma once

#include <stdexcept>
#include <string>

namespace pbflow {

// Base class for all library errors. CLI maps these to nonzero exit codes.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument / precondition violation (bad order, bad grid pairing, ...).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// Configuration file problems (schema, ranges, empty sweep axes).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// A solver failed: no contraction, singular system, max iterations, ...
class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(what) {}
};

// An internal consistency check on constructed fields failed
// (solvability diagnostic, residual self-check, decay monitor).
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what) : Error(what) {}
};

}  // namespace pbflow
