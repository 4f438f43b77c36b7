#pragma once

#include <stdexcept>
#include <string>

namespace meds {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid parameters, violated preconditions, shape/domain mismatches.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& msg) : Error(msg) {}
};

// Trigger density too low for the sinc-frame iteration.
class DensityError : public ParameterError {
 public:
  explicit DensityError(const std::string& msg) : ParameterError(msg) {}
};

// The thresholded data does not satisfy the fold-window structure.
class DetectionError : public Error {
 public:
  explicit DetectionError(const std::string& msg) : Error(msg) {}
};

// File and parse failures.
class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace meds
