#pragma once

#include <stdexcept>
#include <string>

namespace pwe {

// Caller passed arguments violating a documented precondition.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Instance exceeds the exact-mode size limit; caller should switch modes.
struct SizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed config file, serialized object, or experiment description.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver produced a structurally inconsistent result.  Always a bug.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace pwe
