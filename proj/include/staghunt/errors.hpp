#pragma once

#include <stdexcept>
#include <string>

namespace staghunt {

// Caller violated a precondition (stepping a terminal state, empty input, ...).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Bad configuration file or flag combination.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data failed validation (scenario rows, trajectory replay, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace staghunt
