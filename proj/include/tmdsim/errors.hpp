#pragma once

#include <stdexcept>
#include <string>

namespace tmdsim {

/// Bad user input: config files, motion series, CLI arguments.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Query outside the time span covered by a series.
class RangeError : public ValidationError {
 public:
  explicit RangeError(const std::string& what) : ValidationError(what) {}
};

/// Numerical failure during integration (non-finite state or derivative).
class NumericsError : public std::runtime_error {
 public:
  explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tmdsim
