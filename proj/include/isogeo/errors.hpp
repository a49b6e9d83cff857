#pragma once

#include <stdexcept>
#include <string>

namespace isogeo {

// Caller violated a documented precondition (bad arguments, wrong dimension).
struct usage_error : std::invalid_argument {
  explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

// Bad configuration: unsupported body, malformed config file, invalid grid.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A Monte-Carlo estimate is below the resolution the request requires.
struct insufficient_samples_error : std::runtime_error {
  explicit insufficient_samples_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace isogeo
