#pragma once

#include <stdexcept>
#include <string>

namespace td {

/// Bad caller input: shape mismatches, out-of-range modes, malformed configs.
class InvalidArgumentError : public std::runtime_error {
  public:
    explicit InvalidArgumentError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The math broke down: NaN mid-iteration, SVD failed to converge.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem and format failures (bad magic, truncated payload, unwritable path).
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace td
